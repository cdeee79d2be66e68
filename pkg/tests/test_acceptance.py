"""Acceptance criteria 1-10, each at its stated tolerance.

A summary line per criterion is printed at the end of the pytest run; run
with ``-s`` to also see the measured numbers.
"""

import json
import math
import time

import numpy as np
import pytest

from lcdist.bounds import SYMMETRIC_POISSON_CLASS, check_maximum_bound, check_sym, q_class_membership
from lcdist.campaign import CampaignConfig, dumps_body, random_pmf, run_campaign, trial_rng
from lcdist.cli import main
from lcdist.distances import bounded_lipschitz, chi2, kl, levy_prokhorov, tv_sum, wasserstein
from lcdist.experiment import binomial_poisson
from lcdist.logconcave import abs_value_transform, is_log_concave, random_log_concave
from lcdist.oracles import bl_bruteforce, lp_bruteforce, ot_bruteforce
from lcdist.pmf import bernoulli, dirac, discrete_uniform, make_pmf, symmetric_poisson_lambda, symmetric_poisson_unit_variance

SEED = 20240601


def _pairs(tag, count, max_size, spread):
    for i in range(count):
        rng = trial_rng(SEED, i, tag)
        zeros = bool(rng.random() < 0.3)
        a = random_pmf(rng, int(rng.integers(1, max_size + 1)), int(rng.integers(-spread, spread + 1)), zeros)
        b = random_pmf(rng, int(rng.integers(1, max_size + 1)), int(rng.integers(-spread, spread + 1)), zeros)
        yield a, b


def _joint(a, b):
    return len(set(a.points[a.weights > 0].tolist()) | set(b.points[b.weights > 0].tolist()))


@pytest.mark.criterion(1, "Wasserstein fast path vs transportation simplex, 200 pairs, 1e-9")
def test_criterion_1_wasserstein_oracle():
    worst, n = 0.0, 0
    for a, b in _pairs("c1", 200, 12, 6):
        assert a.size <= 12 and b.size <= 12
        for p in (1, 1.5, 2, 3):
            worst = max(worst, abs(wasserstein(p, a, b) - ot_bruteforce(p, a, b)))
            n += 1
    print(f"criterion 1: {n} comparisons, max gap {worst:.3g}")
    assert n == 800 and worst <= 1e-9


@pytest.mark.criterion(2, "Prokhorov closed form vs subset enumeration, 100 pairs, 1e-12")
def test_criterion_2_prokhorov_oracle():
    worst, n = 0.0, 0
    for a, b in _pairs("c2", 100, 8, 5):
        assert _joint(a, b) <= 16
        fast = levy_prokhorov(a, b)
        assert fast == tv_sum(a, b) / 2
        worst = max(worst, abs(fast - lp_bruteforce(a, b)))
        n += 1
    print(f"criterion 2: {n} pairs, max gap {worst:.3g}")
    assert n == 100 and worst <= 1e-12


@pytest.mark.criterion(3, "bounded-Lipschitz DP vs vertex enumeration, 100 pairs, exact")
def test_criterion_3_bl_oracle():
    mismatches, n = 0, 0
    for a, b in _pairs("c3", 100, 5, 2):
        assert max(a.hi, b.hi) - min(a.lo, b.lo) + 1 <= 10
        mismatches += bounded_lipschitz(a, b)[0] != bl_bruteforce(a, b)
        n += 1
    print(f"criterion 3: {n} pairs, {mismatches} mismatches")
    assert n == 100 and mismatches == 0


LEMMA_STATEMENTS = (
    "moment-lem",
    "concentration-lem",
    "concentration-lem/mgf",
    "maximum-bound",
    "maximum-bound/lower",
    "bound-ent",
    "second-bound",
    "second-iso/moment",
    "second-iso/concentration",
    "second-iso/infinity",
    "second-iso/entropy",
    "second-iso/varent",
)


@pytest.mark.criterion(4, "lemma suite on 1000 log-concave pmfs, slack tol 1e-9*max(1,|rhs|), <= 60 s")
def test_criterion_4_lemma_suite():
    start = time.perf_counter()
    rep = run_campaign(CampaignConfig(suite="lemmas", trials=1000, seed=SEED))
    elapsed = time.perf_counter() - start
    summary = rep.body["summary"]
    for name in LEMMA_STATEMENTS:
        s = summary[name]
        print(f"criterion 4: {name:<26} n={s['count']:<5} failures={s['failures']} min slack={s['min_slack']:.3g}")
        assert s["count"] >= 1000 and s["failures"] == 0
    constants = {"second-iso/infinity": math.sqrt(13.0), "second-iso/entropy": 1.5, "second-iso/varent": 39.0}
    for r in rep.body["records"]:
        if r["statement"] in constants:
            assert r["rhs"] == constants[r["statement"]]
        if r["statement"] == "concentration-lem/mgf":
            assert r["rhs"] == 2.0
    print(f"criterion 4: wall time {elapsed:.1f} s")
    assert rep.passed and elapsed <= 60.0


@pytest.mark.criterion(5, "|X| log-concave for symmetric X; {-1..3} counterexample 0.04 < 0.05")
def test_criterion_5_sym():
    rng = np.random.default_rng(SEED)
    for _ in range(1000):
        p = random_log_concave(int(rng.integers(1, 61)), True, rng)
        assert is_log_concave(abs_value_transform(p), tol=1e-9)
        assert check_sym(p).passed
    rep = run_campaign(CampaignConfig(suite="lemmas", trials=200, seed=SEED + 1))
    assert rep.body["summary"]["sym"]["failures"] == 0
    q = abs_value_transform(make_pmf(-1, [0.1, 0.2, 0.4, 0.2, 0.1]))
    lhs, rhs = q.prob(2) ** 2, q.prob(1) * q.prob(3)
    print(f"criterion 5: P(|X|=2)^2 = {lhs!r}, P(|X|=1)P(|X|=3) = {rhs!r}")
    assert (q.prob(1), q.prob(2), q.prob(3)) == (0.5, 0.2, 0.1)
    assert lhs == 0.2 * 0.2 and rhs == 0.5 * 0.1
    assert lhs < rhs
    assert round(lhs, 15) == 0.04 and round(rhs, 15) == 0.05


THEOREM_STATEMENTS = (
    "w1",
    "w1/universal",
    "wp[1,2]",
    "wp[1,2]/universal",
    "wp[1,3]",
    "wp[1,3]/universal",
    "wp[2,4]",
    "wp[2,4]/universal",
    "divergence",
    "divergence/universal",
    "chi2-theorem",
)


@pytest.mark.criterion(6, "theorem suite, >= 200 trials each, symmetric Poisson in Q(1+log 4, 2e-1)")
def test_criterion_6_theorem_suite():
    params = SYMMETRIC_POISSON_CLASS
    assert params.a == 1 + math.log(4) and params.c == 2 * math.e - 1
    assert q_class_membership(symmetric_poisson_unit_variance(), params)
    rep = run_campaign(CampaignConfig(suite="theorems", trials=200, seed=SEED))
    summary = rep.body["summary"]
    for name in THEOREM_STATEMENTS:
        s = summary[name]
        print(f"criterion 6: {name:<22} n={s['count']:<4} failures={s['failures']} min slack={s['min_slack']:.3g}")
        assert s["count"] >= 200 and s["failures"] == 0
    for r in rep.body["records"]:
        if r["statement"].startswith(("divergence", "chi2")):
            assert (r["params"]["a"], r["params"]["c"]) == (params.a, params.c)
    assert rep.passed


RELATION_STATEMENTS = ("dudley-lower", "dudley-upper", "lp-le-tv", "half-tv-le-w1", "pinsker", "kl-le-log1p-chi2")


@pytest.mark.criterion(7, "known relations on 500 pairs; literal tv_sum <= W1 fails as expected")
def test_criterion_7_relations():
    rep = run_campaign(CampaignConfig(suite="relations", trials=500, seed=SEED))
    summary = rep.body["summary"]
    for name in RELATION_STATEMENTS + tuple(k for k in summary if k.startswith("wp-monotone")):
        s = summary[name]
        print(f"criterion 7: {name:<22} n={s['count']:<4} failures={s['failures']} min slack={s['min_slack']:.3g}")
        assert s["failures"] == 0
    assert all(summary[n]["count"] == 500 for n in RELATION_STATEMENTS[:4])
    assert summary["pinsker"]["count"] >= 100
    assert rep.passed
    (lit,) = rep.body["expected_failures"]
    print(f"criterion 7: expected failure {lit['statement']}: {lit['lhs']} > {lit['rhs']}")
    assert lit["pass"] is False and (lit["lhs"], lit["rhs"]) == (2.0, 1.0)


@pytest.mark.criterion(8, "closed-form anchors: log(2m+1), 2m, lambda in [1/4,1], Bernoulli attains max bound")
def test_criterion_8_anchors():
    for m in (1, 5, 50):
        u = discrete_uniform(m)
        assert kl(dirac(0), u) == math.log(2 * m + 1)
        assert chi2(dirac(0), u) == 2 * m
    lam = symmetric_poisson_lambda()
    q = symmetric_poisson_unit_variance()
    second = math.fsum((q.weights * q.points.astype(float) ** 2).tolist())
    print(f"criterion 8: lambda = {lam!r}, sum k^2 q(k) = {second!r}")
    assert 0.25 <= lam <= 1.0
    assert abs(second - 1.0) <= 1e-9
    r = check_maximum_bound(bernoulli(0.5))
    assert abs(r.lhs - r.rhs) <= 1e-12


@pytest.mark.criterion(9, "verify reports byte-identical across runs and across 1 vs 8 workers")
def test_criterion_9_determinism(tmp_path):
    def body(name, workers):
        path = tmp_path / name
        code = main(["verify", "--suite", "all", "--trials", "25", "--seed", "42", "--workers", str(workers), "--out", str(path)])
        assert code == 0
        return dumps_body(json.loads(path.read_text())["body"])

    first, second, wide = body("a.json", 1), body("b.json", 1), body("c.json", 8)
    print(f"criterion 9: body {len(first)} bytes")
    assert first == second == wide


@pytest.mark.criterion(10, "binomial(n,1/n) vs Poisson(1) strictly decreasing in n for tv, W1, KL, <= 10 s")
def test_criterion_10_experiment():
    start = time.perf_counter()
    rows = binomial_poisson(1.0, [2, 4, 8, 16, 32])
    elapsed = time.perf_counter() - start
    for metric in ("tv", "w1", "kl"):
        vals = [r[metric] for r in rows]
        print(f"criterion 10: {metric}: " + ", ".join(f"{v:.4g}" for v in vals))
        assert all(b < a for a, b in zip(vals, vals[1:]))
    print(f"criterion 10: wall time {elapsed:.2f} s")
    assert elapsed <= 10.0
