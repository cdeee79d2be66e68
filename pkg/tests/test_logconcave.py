import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcdist.logconcave import (
    abs_value_transform,
    difference_pmf,
    is_log_concave,
    max_log_concavity_ratio,
    random_log_concave,
)
from lcdist.pmf import bernoulli, dirac, geometric, is_centered, make_pmf

from conftest import log_concave_pmfs, pmfs

PAPER_PMF = make_pmf(-1, [0.1, 0.2, 0.4, 0.2, 0.1])


def test_geometric_is_log_affine():
    g = geometric(0.5, 1e-12)
    assert is_log_concave(g)
    assert abs(max_log_concavity_ratio(g) - 1.0) < 1e-12


def test_five_point_pmf_is_log_concave():
    assert is_log_concave(PAPER_PMF).is_log_concave


def test_bimodal_violation():
    v = is_log_concave(make_pmf(0, [0.4, 0.2, 0.4]))
    assert not v
    assert v.first_violation.k == 1
    assert v.first_violation.lhs == pytest.approx(0.04)
    assert v.first_violation.rhs == pytest.approx(0.16)


def test_interior_zero_is_not_log_concave():
    v = is_log_concave(make_pmf(0, [0.5, 0.0, 0.5]))
    assert not v and v.has_interior_zero


def test_abs_value_examples():
    q = abs_value_transform(make_pmf(-1, [0.25, 0.5, 0.25]))
    assert (q.lo, q.weights.tolist()) == (0, [0.5, 0.5])
    d = abs_value_transform(dirac(-2))
    assert (d.lo, d.hi) == (2, 2)


def test_abs_value_breaks_log_concavity_without_symmetry():
    q = abs_value_transform(PAPER_PMF)
    assert q.prob(1) == 0.5 and q.prob(2) == 0.2 and q.prob(3) == 0.1
    assert q.prob(2) ** 2 < q.prob(1) * q.prob(3)
    assert not is_log_concave(q)


def test_difference_pmf_examples():
    d = difference_pmf(bernoulli(0.5))
    assert d.lo == -1
    assert d.weights.tolist() == [0.25, 0.5, 0.25]
    for k in (-3, 0, 8):
        assert difference_pmf(dirac(k)).weights.tolist() == [1.0]


@given(pmfs())
def test_difference_is_symmetric_and_centered(p):
    d = difference_pmf(p)
    assert d.lo == -d.hi
    assert np.array_equal(d.weights, d.weights[::-1])
    assert is_centered(d, 1e-12)


def test_random_m1_is_dirac():
    p = random_log_concave(1, False, np.random.default_rng(3))
    assert p.size == 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 60))
def test_symmetric_generator(seed, m):
    p = random_log_concave(m, True, np.random.default_rng(seed))
    assert np.array_equal(p.weights, p.weights[::-1])
    assert p.lo == -p.hi
    assert abs(p.moments.mean) <= 1e-15


@given(log_concave_pmfs(symmetric=True))
def test_abs_of_symmetric_is_log_concave(p):
    assert is_log_concave(abs_value_transform(p), tol=1e-9)


def test_generator_soundness_sweep():
    rng = np.random.default_rng(2024)
    for i in range(10_000):
        p = random_log_concave(int(rng.integers(1, 101)), bool(i % 2), rng)
        assert is_log_concave(p, 1e-12), p


def test_generator_is_seeded():
    a = random_log_concave(17, False, np.random.default_rng(9))
    b = random_log_concave(17, False, np.random.default_rng(9))
    assert a.offset == b.offset and np.array_equal(a.weights, b.weights)


@pytest.mark.parametrize("m", [0, -3, 10**5, 2.5])
def test_generator_rejects_sizes(m):
    with pytest.raises(ValueError):
        random_log_concave(m)
