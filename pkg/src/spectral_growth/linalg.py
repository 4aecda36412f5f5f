"""Dense symmetric eigenvalues: Householder tridiagonalization + implicit-shift QL."""

from __future__ import annotations

import math

import numpy as np

MAX_MATRIX_SIZE = 4000
DEFAULT_EIG_TOL = 1e-9


class EigenSolverError(RuntimeError):
    """QL iteration budget exhausted before an eigenvalue converged."""


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal form by Householder reflections.

    Returns ``(diag, offdiag)`` with ``len(offdiag) == len(diag) - 1``. The
    input is not modified.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1 :, k]
        xs = float(np.abs(x).max())
        if xs == 0.0:
            continue
        v = x / xs
        alpha = -math.copysign(float(np.linalg.norm(v)), v[0])
        v[0] -= alpha
        vn = float(np.linalg.norm(v))
        if vn == 0.0:
            continue
        v /= vn
        # A <- H A H with H = I - 2 v v^T on the trailing block
        sub = a[k + 1 :, k + 1 :]
        p = sub @ v
        w = p - (v @ p) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1 :, k] = 0.0
        a[k, k + 1 :] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha * xs
    diag = np.diag(a).copy()
    off = np.diag(a, 1).copy() if n > 1 else np.zeros(0)
    return diag, off


def tridiagonal_eigenvalues(diag, off, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix (implicit QL, Wilkinson shift)."""
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in off] + [0.0]
    # absolute deflation floor, far below any tolerance used downstream
    floor = 1e-18 * max([abs(x) for x in d + e] + [0.0])
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            iters += 1
            if iters > max_iter:
                raise EigenSolverError(
                    f"eigenvalue {l} did not converge within {max_iter} QL iterations"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(sorted(d))


def eigvalsh(a, max_size: int = MAX_MATRIX_SIZE) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    if n > max_size:
        raise ValueError(f"matrix of size {n} exceeds the {max_size} cap")
    if n == 0:
        return np.zeros(0)
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not exactly symmetric")
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return np.zeros(n)
    # unit-scale entries keep Householder norms away from under/overflow
    return scale * tridiagonal_eigenvalues(*tridiagonalize(a / scale))


def trace_residual(a, eigenvalues) -> float:
    """Relative mismatch between the trace and the eigenvalue sum."""
    tr = float(np.trace(a))
    scale = max(1.0, float(np.abs(a).sum()) / max(1, len(eigenvalues)), abs(tr))
    return abs(float(np.sum(eigenvalues)) - tr) / scale
