"""Seeded randomized verification campaigns and their JSON reports.

Each (suite, trial) pair gets its own generator seeded from
``SeedSequence([master_seed, trial, crc32(suite)])``, so results do not
depend on scheduling or on how many workers run the trials.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import __version__
from .bounds import (
    SYMMETRIC_POISSON_CLASS,
    check_concentration,
    check_entropy_bound,
    check_fdiv_lemma,
    check_iso_remark,
    check_log_squared_bound,
    check_maximum_bound,
    check_moment_lemma,
    check_noncentered_tail,
    check_sym,
    known_relations_suite,
    literal_tv_le_w1,
    q_class_membership,
    theorem_chi2_rhs,
    theorem_kl_rhs,
    theorem_w1_rhs,
    theorem_wp_rhs,
)
from .distances import CHI2, FUNCTIONS, KL, bounded_lipschitz, f_divergence, levy_prokhorov, wasserstein
from .logconcave import random_log_concave
from .oracles import bl_bruteforce, fdiv_bruteforce, lp_bruteforce, ot_bruteforce, report
from .pmf import DiscretePmf, dirac, make_pmf, symmetric_poisson_unit_variance

SUITES = ("lemmas", "theorems", "relations", "oracles")
BETAS = (1.0, 1.5, 2.0, 3.0, 5.0)
TS = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)
WP_PAIRS = ((1, 2), (1, 3), (2, 4))
W_ORDERS = (1, 1.5, 2, 3)
ORACLE_TOLS = {"wasserstein": 1e-9, "prokhorov": 1e-12, "bounded-lipschitz": 0.0, "f-divergence": 1e-12}


@dataclass(frozen=True)
class CampaignConfig:
    suite: str = "all"
    trials: int = 200
    seed: int = 0
    min_size: int = 1
    max_size: int = 40
    tol: float = 1e-9
    oracle_tols: dict = field(default_factory=lambda: dict(ORACLE_TOLS))
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (1 <= self.min_size <= self.max_size <= 10_000):
            raise ValueError("need 1 <= min_size <= max_size <= 10000")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (math.isfinite(self.tol) and self.tol >= 0):
            raise ValueError("tol must be a finite nonnegative number")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)

    def echo(self) -> dict:
        """The part of the configuration that determines the report body."""
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        d["oracle_tols"] = dict(sorted(d["oracle_tols"].items()))
        return d


def trial_rng(seed: int, trial: int, suite: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial, zlib.crc32(suite.encode())]))


@lru_cache(maxsize=None)
def reference_measure() -> DiscretePmf:
    return symmetric_poisson_unit_variance()


# ---------------------------------------------------------------------------
# instance generators


def _size(rng, cfg: CampaignConfig) -> int:
    return int(rng.integers(cfg.min_size, cfg.max_size + 1))


def unit_variance_log_concave(rng, max_size: int = 9, symmetric: bool = True) -> DiscretePmf:
    """Random log-concave pmf with variance <= 1, by resampling the support width."""
    for _ in range(200):
        p = random_log_concave(int(rng.integers(1, max_size + 1)), symmetric, rng)
        if p.moments.variance <= 1.0:
            return p
        max_size = max(1, max_size - 1)
    return dirac(0)


def random_pmf(rng, size: int, offset: int, zeros: bool = False) -> DiscretePmf:
    """Arbitrary pmf with positive end weights; ``zeros`` allows interior zeros."""
    w = rng.random(size) ** 2
    if zeros and size > 2:
        w[1:-1][rng.random(size - 2) < 0.25] = 0.0
    w[0] += 0.05
    w[-1] += 0.05
    return make_pmf(offset, w, normalize=True)


def covering_pmf(rng, mu: DiscretePmf, extra: int = 3) -> DiscretePmf:
    """Random pmf with strictly positive weights on an interval containing supp(mu)."""
    left = int(rng.integers(0, extra + 1))
    right = int(rng.integers(0, extra + 1))
    return random_pmf(rng, mu.size + left + right, mu.lo - left)


# ---------------------------------------------------------------------------
# trials


def _lemma_trial(rng, cfg: CampaignConfig) -> list:
    pmf = random_log_concave(_size(rng, cfg), bool(rng.random() < 0.5), rng)
    sym = random_log_concave(_size(rng, cfg), True, rng)
    small = unit_variance_log_concave(rng, symmetric=bool(rng.random() < 0.5))
    recs = [check_moment_lemma(pmf, b) for b in BETAS]
    sd = math.sqrt(pmf.moments.variance)
    recs += [check_concentration(pmf, t * max(sd, 1.0)) for t in TS]
    recs += [check_noncentered_tail(pmf, t * max(sd, 1.0)) for t in TS]
    recs += [check_maximum_bound(pmf), check_entropy_bound(pmf), check_log_squared_bound(pmf), check_sym(sym)]
    for b, t in zip(BETAS, TS[1:]):
        recs += check_iso_remark(small, b, t)
    return recs


def _theorem_trial(rng, cfg: CampaignConfig) -> list:
    mu = random_log_concave(_size(rng, cfg), True, rng)
    nu = random_log_concave(_size(rng, cfg), True, rng)
    small = unit_variance_log_concave(rng)
    other = unit_variance_log_concave(rng)
    recs = []
    # the second pair has E|X| <= sqrt(Var) <= 1, so the universal variants always apply
    for x, y in ((mu, nu), (small, other)):
        recs.append(theorem_w1_rhs(x, y))
        recs += [theorem_wp_rhs(p, q, x, y) for p, q in WP_PAIRS]
    ref = reference_measure()
    params = SYMMETRIC_POISSON_CLASS
    if not q_class_membership(ref, params):
        raise RuntimeError("reference measure left its Q(a, c) class")
    recs += [
        theorem_kl_rhs(small, ref, params),
        theorem_chi2_rhs(small, ref, params),
        check_fdiv_lemma(KL, small, ref, params),
        check_fdiv_lemma(CHI2, small, ref, params),
    ]
    return recs


def _relations_trial(rng, cfg: CampaignConfig) -> list:
    kind = int(rng.integers(0, 3))
    m1, m2 = _size(rng, cfg), _size(rng, cfg)
    if kind == 0:
        mu = random_log_concave(m1, False, rng)
        nu = random_log_concave(m2, False, rng)
    else:
        mu = random_pmf(rng, m1, int(rng.integers(-m1, m1 + 1)), zeros=True)
        nu = covering_pmf(rng, mu) if kind == 1 else random_pmf(rng, m2, int(rng.integers(-m2, m2 + 1)), zeros=True)
    return known_relations_suite(mu, nu)


def _oracle_trial(rng, cfg: CampaignConfig) -> list:
    tol = cfg.oracle_tols
    out = []
    a = random_pmf(rng, int(rng.integers(1, 13)), int(rng.integers(-6, 7)), zeros=bool(rng.random() < 0.3))
    b = random_pmf(rng, int(rng.integers(1, 13)), int(rng.integers(-6, 7)), zeros=bool(rng.random() < 0.3))
    for p in W_ORDERS:
        out.append(report(f"wasserstein[{p:g}]", a, b, wasserstein(p, a, b), ot_bruteforce(p, a, b), tol["wasserstein"]))
    if len(set(a.points[a.weights > 0]) | set(b.points[b.weights > 0])) <= 16:
        out.append(report("prokhorov", a, b, levy_prokhorov(a, b), lp_bruteforce(a, b), tol["prokhorov"]))
    c = random_pmf(rng, int(rng.integers(1, 7)), int(rng.integers(-2, 3)))
    d = random_pmf(rng, int(rng.integers(1, 7)), int(rng.integers(-2, 3)))
    out.append(report("prokhorov", c, d, levy_prokhorov(c, d), lp_bruteforce(c, d), tol["prokhorov"]))
    out.append(report("bounded-lipschitz", c, d, bounded_lipschitz(c, d)[0], bl_bruteforce(c, d), tol["bounded-lipschitz"]))
    e = covering_pmf(rng, c)
    for name, f in sorted(FUNCTIONS.items()):
        out.append(report(f"f-divergence[{name}]", c, e, f_divergence(f, c, e), fdiv_bruteforce(f, c, e), tol["f-divergence"]))
    return out


TRIALS: dict[str, Callable] = {
    "lemmas": _lemma_trial,
    "theorems": _theorem_trial,
    "relations": _relations_trial,
    "oracles": _oracle_trial,
}


def _finite(x: float) -> Any:
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _entries(suite: str, trial: int, results: list, tol: float | None = None) -> list[dict]:
    rows = []
    for res in results:
        flat = res.flatten() if hasattr(res, "flatten") else [res]
        for r in flat:
            if hasattr(r, "statement"):
                if tol is not None:
                    r = replace(r, tol=tol)
                row = r.to_dict()
                row["kind"] = "bound"
            else:
                row = {
                    "kind": "oracle",
                    "statement": f"oracle/{r.oracle}",
                    "fast": r.fast,
                    "reference": r.reference,
                    "abs_gap": r.abs_gap,
                    "tol": r.tol,
                    "pass": r.passed,
                    "inputs": r.fingerprint.split(":"),
                }
            row = {k: _finite(v) if isinstance(v, float) else v for k, v in row.items()}
            if "params" in row:
                row["params"] = {k: _finite(v) if isinstance(v, float) else v for k, v in row["params"].items()}
            row["suite"] = suite
            row["trial"] = trial
            row["seq"] = len(rows)
            rows.append(row)
    return rows


def run_trial(task: tuple[CampaignConfig, str, int]) -> list[dict]:
    cfg, suite, trial = task
    rng = trial_rng(cfg.seed, trial, suite)
    return _entries(suite, trial, TRIALS[suite](rng, cfg), cfg.tol)


def _summary(rows: list[dict]) -> dict:
    out: dict[str, dict] = {}
    for r in rows:
        s = out.setdefault(r["statement"], {"count": 0, "failures": 0})
        s["count"] += 1
        s["failures"] += 0 if r["pass"] else 1
        if r["kind"] == "bound" and isinstance(r["slack"], float):
            s["min_slack"] = min(s.get("min_slack", math.inf), r["slack"])
            if not r["pass"]:
                s["max_violation"] = max(s.get("max_violation", 0.0), -r["slack"])
        elif r["kind"] == "oracle":
            s["max_gap"] = max(s.get("max_gap", 0.0), r["abs_gap"])
    return dict(sorted(out.items()))


@dataclass
class Report:
    body: dict
    wall_time: float
    workers: int

    @property
    def passed(self) -> bool:
        return self.body["passed"]

    def body_bytes(self) -> bytes:
        return dumps_body(self.body)

    def failing(self) -> list[dict]:
        return [r for r in self.body["records"] if not r["pass"]]

    def write(self, path) -> None:
        doc = {"body": self.body, "meta": {"wall_time_s": round(self.wall_time, 3), "workers": self.workers}}
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
            fh.write("\n")


def dumps_body(body: dict) -> bytes:
    return json.dumps(body, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


def run_campaign(cfg: CampaignConfig) -> Report:
    start = time.perf_counter()
    tasks = [(cfg, s, t) for s in cfg.suites for t in range(cfg.trials)]
    if cfg.workers == 1:
        chunks = [run_trial(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(run_trial, tasks, chunksize=max(1, len(tasks) // (4 * cfg.workers))))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["suite"], r["trial"], r["seq"]))
    expected = []
    if "relations" in cfg.suites:
        lit = literal_tv_le_w1(dirac(0), dirac(1)).to_dict()
        lit["note"] = "sum-convention total variation exceeds W1 for adjacent point masses; tv_sum/2 <= W1 is the valid form"
        expected.append(lit)
    body = {
        "artifact": "lcdist",
        "version": __version__,
        "config": cfg.echo(),
        "passed": all(r["pass"] for r in rows),
        "summary": _summary(rows),
        "records": rows,
        "expected_failures": expected,
    }
    return Report(body, time.perf_counter() - start, cfg.workers)
