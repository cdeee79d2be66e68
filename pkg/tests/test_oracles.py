import math

import numpy as np
import pytest
from hypothesis import given
from scipy.optimize import linprog

from lcdist.distances import CHI2, FUNCTIONS, KL, bounded_lipschitz, f_divergence, levy_prokhorov, wasserstein
from lcdist.errors import InstanceTooLarge, SupportViolation
from lcdist.oracles import (
    bl_bruteforce,
    bl_product_enumeration,
    fdiv_bruteforce,
    lp_bruteforce,
    ot_bruteforce,
    report,
    transport_simplex,
)
from lcdist.pmf import bernoulli, dirac, discrete_uniform, make_pmf

from conftest import pmfs

B05, B025 = bernoulli(0.5), bernoulli(0.25)


def test_ot_examples():
    assert ot_bruteforce(1, B05, B025) == pytest.approx(0.25, abs=1e-15)
    assert ot_bruteforce(2, dirac(0), dirac(3)) == pytest.approx(3.0, rel=1e-15)


def test_transport_simplex_small_assignment():
    cost = np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
    third = [1 / 3] * 3
    # optimal permutation 0->1, 1->0, 2->2 costs 1 + 2 + 2
    assert transport_simplex(third, third, cost) == pytest.approx(5 / 3, rel=1e-14)


def test_lp_examples():
    assert lp_bruteforce(dirac(0), dirac(5)) == 1.0
    assert lp_bruteforce(B05, B025) == 0.25
    assert lp_bruteforce(B05, B05) == 0.0


def test_bl_examples():
    assert bl_bruteforce(dirac(0), dirac(2)) == 2.0
    assert bl_bruteforce(B05, B05) == 0.0


def test_fdiv_example():
    assert fdiv_bruteforce(CHI2, dirac(0), discrete_uniform(3)) == pytest.approx(6.0, rel=1e-14)
    with pytest.raises(SupportViolation):
        fdiv_bruteforce(KL, B05, dirac(0))


def test_size_guards():
    wide = discrete_uniform(10)
    with pytest.raises(InstanceTooLarge):
        lp_bruteforce(wide, dirac(0))
    with pytest.raises(InstanceTooLarge):
        bl_bruteforce(wide, dirac(0))
    with pytest.raises(InstanceTooLarge):
        ot_bruteforce(1, discrete_uniform(15), discrete_uniform(15))


def test_report_gaps():
    r = report("x", B05, B025, 1.0, 1.0 + 1e-10, 1e-9)
    assert r.passed and r.abs_gap == pytest.approx(1e-10)
    assert not report("x", B05, B025, 1.0, 1.1, 1e-9).passed


@given(pmfs(max_size=12), pmfs(max_size=12))
def test_wasserstein_matches_simplex(mu, nu):
    for p in (1, 1.5, 2, 3):
        assert abs(wasserstein(p, mu, nu) - ot_bruteforce(p, mu, nu)) <= 1e-9


@given(pmfs(max_size=8, min_offset=-4, max_offset=4), pmfs(max_size=8, min_offset=-4, max_offset=4))
def test_prokhorov_matches_enumeration(mu, nu):
    assert abs(levy_prokhorov(mu, nu) - lp_bruteforce(mu, nu)) <= 1e-12


@given(pmfs(max_size=5, min_offset=-2, max_offset=2), pmfs(max_size=5, min_offset=-2, max_offset=2))
def test_bl_dp_matches_both_enumerations(mu, nu):
    dp = bounded_lipschitz(mu, nu)[0]
    assert dp == bl_bruteforce(mu, nu)
    assert dp == bl_product_enumeration(mu, nu)


@given(pmfs(zeros=False), pmfs(zeros=False))
def test_fdiv_matches_resummation(mu, nu):
    wide = make_pmf(min(mu.lo, nu.lo) - 1, np.ones(max(mu.hi, nu.hi) - min(mu.lo, nu.lo) + 3), normalize=True)
    for f in FUNCTIONS.values():
        assert abs(f_divergence(f, mu, wide) - fdiv_bruteforce(f, mu, wide)) <= 1e-12


# third route: a generic LP solver on the same primal problems


def _linprog_ot(p, mu, nu):
    a = [(k, w) for k, w in mu.items() if w > 0]
    b = [(k, w) for k, w in nu.items() if w > 0]
    m, n = len(a), len(b)
    c = np.array([[abs(j - k) ** p for k, _ in b] for j, _ in a]).ravel()
    rows = np.zeros((m + n, m * n))
    for i in range(m):
        rows[i, i * n : (i + 1) * n] = 1
    for j in range(n):
        rows[m + j, j::n] = 1
    rhs = [w for _, w in a] + [w for _, w in b]
    res = linprog(c, A_eq=rows, b_eq=rhs, bounds=(0, None), method="highs")
    return res.fun ** (1 / p)


def _linprog_bl(mu, nu):
    lo, hi = min(mu.lo, nu.lo), max(mu.hi, nu.hi)
    n = hi - lo + 1
    d = np.array([mu.prob(k) - nu.prob(k) for k in range(lo, hi + 1)])
    diff = np.zeros((2 * (n - 1), n))
    for i in range(n - 1):
        diff[2 * i, i], diff[2 * i, i + 1] = 1, -1
        diff[2 * i + 1, i], diff[2 * i + 1, i + 1] = -1, 1
    res = linprog(-d, A_ub=diff if n > 1 else None, b_ub=np.ones(2 * (n - 1)) if n > 1 else None, bounds=(-1, 1), method="highs")
    return -res.fun


@given(pmfs(max_size=9), pmfs(max_size=9))
def test_generic_lp_solver_agrees(mu, nu):
    for p in (1, 2):
        assert math.isclose(wasserstein(p, mu, nu), _linprog_ot(p, mu, nu), rel_tol=1e-6, abs_tol=1e-7)
    assert math.isclose(bounded_lipschitz(mu, nu)[0], _linprog_bl(mu, nu), rel_tol=1e-6, abs_tol=1e-7)
