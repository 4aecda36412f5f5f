import math

import pytest
from hypothesis import given, strategies as st

from oracles import eigvals, toeplitz_gram
from spectral_growth import groups as G
from spectral_growth import kernels as K
from spectral_growth import reconstruct as RC
from spectral_growth import relative as R
from spectral_growth.groups import ball_enumerate
from spectral_growth.parsing import parse_kernel

Z1 = G.FreeAbelianGroup(1)
Z2 = G.FreeAbelianGroup(2)
F2 = G.FreeGroup(2)


@pytest.fixture(scope="module")
def z_rk():
    kernel = K.word_length_kernel(Z1)
    return RC.reconstruct(Z1, kernel, depth=24)


def test_first_epsilons():
    sched = RC.epsilon_schedule(Z1, K.word_length_kernel(Z1), 3)
    assert sched.epsilons[0] == 1.0
    assert sched.epsilons[1] == pytest.approx(1 / 6, rel=1e-15)
    assert sched.maxima == (1, 2, 3)


def test_zero_kernel_schedule():
    sched = RC.epsilon_schedule(Z2, K.zero_kernel(Z2), 5)
    assert sched.epsilons == (1.0,) * 5


@pytest.mark.parametrize("model,spec", [(Z1, "wordlength"), (Z2, "l2sq"), (F2, "wordlength")])
def test_schedule_constraint_exhaustive(model, spec):
    kernel = parse_kernel(spec, model)
    depth = 24 if model is Z1 else 6
    sched = RC.epsilon_schedule(model, kernel, depth)
    for k, (r, e) in enumerate(zip(sched.radii, sched.epsilons), start=1):
        worst = max(1 - 1 / (1 + e * kernel(g)) for g in ball_enumerate(model, r).elements)
        assert worst <= 2.0**-k
        # maximal: a slightly larger eps breaks the constraint
        up = e * (1 + 1e-6)
        assert max(1 - 1 / (1 + up * kernel(g)) for g in ball_enumerate(model, r).elements) > 2.0**-k


def test_identity_is_zero(z_rk):
    assert z_rk(Z1.identity) == 0.0


def test_strictly_increasing_in_abs(z_rk):
    vals = [z_rk((n,)) for n in range(0, 200)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(z_rk((n,)) == z_rk((-n,)) for n in range(50))


@given(st.integers(-10**6, 10**6))
def test_partials_monotone_in_depth(n):
    kernel = K.word_length_kernel(Z1)
    rk = RC.reconstruct(Z1, kernel, depth=12)
    parts = [rk.partial((n,), k) for k in range(13)]
    assert all(a <= b for a, b in zip(parts, parts[1:]))


def test_truncation_bound_dominates(z_rk):
    # compare K=10 truncation against the depth-24 sum plus its own bound
    short = RC.ReconstructedKernel(z_rk.base, z_rk.schedule, 10)
    for n in range(0, 12):
        s = (n,)
        omitted = z_rk(s) - short(s)
        assert omitted <= short.truncation_bound(s) + 1e-15
    # inside F_j with j <= K the bound is at most 2^-K
    assert short.truncation_bound((3,)) <= 2.0**-10


def test_schoenberg_k10_ball5():
    rk = RC.reconstruct(Z1, K.word_length_kernel(Z1), depth=10)
    rep = K.schoenberg_check(Z1, rk.as_kernel(), 5, K.DEFAULT_T_GRID, 1e-9)
    assert rep.passed
    for t in K.DEFAULT_T_GRID:
        gram = toeplitz_gram(lambda d: math.exp(-t * rk((d,))), 5)
        assert eigvals(gram).min() >= -1e-9


def test_invariance_transfer():
    cosets = R.axis_inclusion(Z2, 0)
    kernel = parse_kernel("table(abs-m)", Z2)
    rk = RC.reconstruct(Z2, kernel, depth=10)
    assert R.h_invariance_check(cosets, kernel, 2).passed
    assert R.h_invariance_check(cosets, rk.as_kernel(), 2).passed


def test_gamma_one(z_rk):
    audit = RC.properness_audit(z_rk, R.trivial_inclusion(Z1), 1)
    assert set(audit.gamma_sets[0]) == {"(-1)", "(0)", "(1)"}


@pytest.mark.parametrize("levels", [2, 4, 8])
def test_audit_bound(z_rk, levels):
    audit = RC.properness_audit(z_rk, R.trivial_inclusion(Z1), levels)
    assert audit.sampled > 0
    assert audit.passed
    assert audit.min_lprime >= levels / 2 - 2.0**-20


def test_audit_against_direct_sampling(z_rk):
    # independent check: every n with |n| > 1/eps_k for all k <= N
    eps = z_rk.schedule.epsilons[:4]
    cut = max(1 / e for e in eps)
    outside = [n for n in range(-400, 401) if abs(n) > cut]
    assert min(z_rk((n,)) for n in outside) >= 2 - 2.0**-20


def test_audit_full_vacuous():
    rk = RC.reconstruct(Z2, K.zero_kernel(Z2), depth=6)
    audit = RC.properness_audit(rk, R.full_inclusion(Z2), 3)
    assert audit.passed and audit.sampled == 0
    assert audit.gamma_sizes == (1, 1, 1)


def test_audit_needs_properness():
    kernel = parse_kernel("pullback(expsum(b), wordlength)", F2)
    rk = RC.reconstruct(F2, kernel, depth=4)
    from spectral_growth.spectral import CertificateError

    with pytest.raises(CertificateError):
        RC.properness_audit(rk, R.cyclic_free_inclusion(F2, 0), 2, max_radius=5)


def test_relative_audit_axis():
    kernel = parse_kernel("table(abs-m)", Z2)
    rk = RC.reconstruct(Z2, kernel, depth=12)
    audit = RC.properness_audit(rk, R.axis_inclusion(Z2, 0), 4)
    assert audit.passed
    assert audit.gamma_sizes[0] == 3
