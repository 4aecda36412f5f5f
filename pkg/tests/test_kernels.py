import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import eigvals, toeplitz_gram
from spectral_growth.groups import CyclicGroup, FreeAbelianGroup, FreeGroup, HeisenbergGroup, ball_enumerate
from spectral_growth.kernels import (
    DEFAULT_T_GRID,
    direct_cnd_check,
    kernel_gram,
    l2sq_kernel,
    positive_definite_check,
    power_kernel,
    schoenberg_check,
    table_kernel,
    word_length_kernel,
)
from spectral_growth.parsing import GrammarError, parse_kernel

Z = FreeAbelianGroup(1)
Z2 = FreeAbelianGroup(2)
F2 = FreeGroup(2)


def test_schoenberg_z_abs_radius5():
    report = schoenberg_check(Z, word_length_kernel(Z), 5, [1.0])
    oracle = eigvals(toeplitz_gram(lambda d: math.exp(-abs(d)), 5)).min()
    assert oracle > 0
    assert report.passed
    assert report.entries[0].min_eigenvalue == pytest.approx(oracle, abs=1e-12)


def test_schoenberg_free_group_word_length():
    report = schoenberg_check(F2, word_length_kernel(F2), 3, [0.1, 1.0, 10.0])
    assert report.passed
    assert report.verdict == "pass on grid"


def test_schoenberg_cubic_power_fails():
    oracle = min(eigvals(toeplitz_gram(lambda d: math.exp(-t * abs(d) ** 3), 6)).min() for t in DEFAULT_T_GRID)
    assert oracle < -1e-6
    report = schoenberg_check(Z, power_kernel(Z, 3), 6)
    assert not report.passed
    assert report.min_eigenvalue == pytest.approx(oracle, abs=1e-10)


def test_direct_cnd_z_abs():
    k = toeplitz_gram(abs, 4)
    p = np.eye(9) - 1 / 9
    oracle = eigvals(p @ k @ p).max()
    report = direct_cnd_check(Z, word_length_kernel(Z), 4)
    assert report.passed
    assert report.max_eigenvalue == pytest.approx(oracle, abs=1e-9)


def test_direct_cnd_z2_squares():
    report = direct_cnd_check(Z2, l2sq_kernel(Z2), 3)
    ball = ball_enumerate(Z2, 3).elements
    k = np.array([[sum((a - b) ** 2 for a, b in zip(g, h)) for h in ball] for g in ball], dtype=float)
    p = np.eye(len(ball)) - 1 / len(ball)
    assert eigvals(p @ k @ p).max() <= 1e-9
    assert report.passed


def test_direct_cnd_radius_zero():
    report = direct_cnd_check(Z, word_length_kernel(Z), 0)
    assert report.passed and report.empty_subspace
    assert report.max_eigenvalue == 0.0


def test_direct_cnd_detects_cubic():
    assert not direct_cnd_check(Z, power_kernel(Z, 3), 3).passed


def test_positive_definite_resolvent_diagonal():
    phi = lambda g: 1.0 / (1.0 + abs(g[0]))
    oracle = eigvals(toeplitz_gram(lambda d: 1.0 / (1.0 + abs(d)), 4)).min()
    assert oracle > 0
    assert positive_definite_check(Z, phi, 4).passed


@pytest.mark.parametrize("model", [Z, F2, HeisenbergGroup()], ids=str)
def test_positive_definite_constant_one(model):
    report = positive_definite_check(model, lambda g: 1.0, 3)
    assert report.passed
    assert abs(report.min_eigenvalue) <= 1e-9


def test_positive_definite_negative_off_diagonal_fails():
    phi = lambda g: 1.0 if g == (0,) else -1.0
    # 2I - J on 5 points: eigenvalues 2 (x4) and -3
    assert np.allclose(eigvals(2 * np.eye(5) - np.ones((5, 5))), [-3, 2, 2, 2, 2])
    report = positive_definite_check(Z, phi, 2)
    assert not report.passed
    assert report.min_eigenvalue == pytest.approx(-3.0)


@pytest.mark.parametrize(
    "spec,model",
    [("wordlength", F2), ("l2sq", Z2), ("power(1.5)", Z), ("pullback(coord(1), wordlength)", Z2),
     ("sum(l1, l2sq)", Z2), ("scale(2.5, wordlength)", HeisenbergGroup()), ("pullback(abelian, l1)", F2),
     ("wordlength", CyclicGroup(6))],
)
def test_gram_symmetric_unit_diagonal_and_axioms(spec, model):
    kernel = parse_kernel(spec, model)
    assert kernel.validate(3) == []
    ball = ball_enumerate(model, 2)
    k = kernel_gram(model, ball.elements, kernel)
    assert np.array_equal(k, k.T)
    m = np.exp(-0.7 * k)
    assert np.all(np.diag(m) == 1.0)


@pytest.mark.parametrize(
    "spec,model", [("wordlength", F2), ("l2sq", Z2), ("power(2)", Z), ("power(3)", Z), ("power(2.5)", Z)], ids=str
)
def test_schoenberg_direct_consistency(spec, model):
    kernel = parse_kernel(spec, model)
    direct = direct_cnd_check(model, kernel, 2)
    sch = schoenberg_check(model, kernel, 2)
    if direct.max_eigenvalue < -1e-6 or (direct.passed and direct.max_eigenvalue <= 1e-9):
        assert sch.passed
    if not sch.passed:
        assert not direct.passed or direct.max_eigenvalue > -1e-9


@given(st.sampled_from([2.5, 3.0, 4.0]), st.integers(1, 4))
def test_failure_persists_on_larger_balls(alpha, r):
    kernel = power_kernel(Z, alpha)
    small = schoenberg_check(Z, kernel, r)
    big = schoenberg_check(Z, kernel, r + 2)
    for a, b in zip(small.entries, big.entries):
        assert b.min_eigenvalue <= a.min_eigenvalue + 1e-12


def test_trace_sanity_recorded():
    report = schoenberg_check(F2, word_length_kernel(F2), 3)
    assert all(e.trace_residual < 1e-8 for e in report.entries)


def test_table_kernel(tmp_path):
    path = tmp_path / "k.csv"
    path.write_text("encoding,value\n(1),1\n(-1),1\n(2),4\n(-2),4\n")
    k = table_kernel(Z, path)
    assert k((2,)) == 4 and k((0,)) == 0
    with pytest.raises(KeyError):
        k((3,))


def test_kernel_grammar_errors():
    with pytest.raises(GrammarError):
        parse_kernel("l2sq", F2)
    with pytest.raises(GrammarError):
        parse_kernel("nonsense(1)", Z)
    with pytest.raises(GrammarError):
        parse_kernel("table(/no/such/file)", Z)
