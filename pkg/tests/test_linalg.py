import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from oracles import eigvals
from spectral_growth.linalg import EigenSolverError, eigvalsh, trace_residual, tridiagonal_eigenvalues, tridiagonalize

finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


@st.composite
def symmetric_matrices(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    a = draw(hnp.arrays(np.float64, (n, n), elements=finite))
    return (a + a.T) / 2


@given(symmetric_matrices())
def test_matches_lapack_oracle(a):
    ours = eigvalsh(a)
    ref = eigvals(a)
    scale = max(1.0, np.abs(ref).max())
    assert np.allclose(ours, ref, atol=1e-9 * scale, rtol=0)
    assert trace_residual(a, ours) < 1e-8


@given(symmetric_matrices())
def test_tridiagonal_form_preserves_spectrum(a):
    d, e = tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(eigvals(t), eigvals(a), atol=1e-8 * max(1.0, np.abs(a).max()))


def test_larger_random():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(300, 300))
    a = a + a.T
    assert np.abs(eigvalsh(a) - eigvals(a)).max() < 1e-10


@pytest.mark.parametrize(
    "matrix,expected",
    [
        (np.ones((5, 5)), [0, 0, 0, 0, 5]),
        (np.diag([3.0, -1.0, 2.0]), [-1, 2, 3]),
        (np.array([[2.0, 1.0], [1.0, 2.0]]), [1, 3]),
        (np.zeros((0, 0)), []),
    ],
)
def test_known_spectra(matrix, expected):
    assert np.allclose(eigvalsh(matrix), expected, atol=1e-12)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        eigvalsh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_size_cap():
    with pytest.raises(ValueError):
        eigvalsh(np.eye(5), max_size=4)


def test_iteration_budget_reported():
    with pytest.raises(EigenSolverError):
        tridiagonal_eigenvalues([1.0, 2.0, 3.0, 4.0], [1.0, 1.0, 1.0], max_iter=0)
