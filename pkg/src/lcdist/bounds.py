"""Evaluators for the comparison inequalities between distances.

Every ``check_*`` / ``theorem_*`` function returns a :class:`BoundCheckRecord`
holding the two sides of one inequality ``lhs <= rhs``.  Secondary
inequalities tied to the same statement (universal variants, proof
waypoints, the other side of a two-sided bound) ride along as ``children``.

Right-hand sides are transcribed with every constant as stated; nothing is
simplified.  Where a formula degenerates to 0 * log(K / 0) at coincident
measures (d_LP, W_p or d_TV equal to 0) the right-hand side is its limit, 0.

Hypotheses (log-concavity, centering, class membership, support inclusion)
are validated and raise :class:`AssumptionError` when they fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .distances import (
    KL,
    ConvexFunction,
    bounded_lipschitz,
    chi2,
    f_divergence,
    kl,
    levy_prokhorov,
    support_violations,
    transport_cost,
    tv_sum,
    wasserstein,
)
from .errors import AssumptionError
from .logconcave import abs_value_transform, is_log_concave, max_log_concavity_ratio
from .pmf import DiscretePmf

SLACK_TOL = 1e-9
CENTER_TOL = 1e-9
VARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class QClassParams:
    """Reference class Q(a, c): log(1/q(k)) <= a k^2 + log(c) on supp(q)."""

    a: float
    c: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a!r}")
        if not self.c >= 1:
            raise ValueError(f"c must be >= 1, got {self.c!r}")


SYMMETRIC_POISSON_CLASS = QClassParams(1.0 + math.log(4.0), 2.0 * math.e - 1.0)


@dataclass(frozen=True)
class BoundCheckRecord:
    statement: str
    lhs: float
    rhs: float
    params: Mapping[str, float] = field(default_factory=dict)
    fingerprints: tuple[str, ...] = ()
    children: tuple["BoundCheckRecord", ...] = ()
    tol: float = SLACK_TOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        s = self.slack
        if math.isnan(s):
            return False
        return s >= -self.tol * max(1.0, abs(self.rhs))

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.flatten())

    def flatten(self) -> list["BoundCheckRecord"]:
        out = [self]
        for child in self.children:
            out.extend(child.flatten())
        return out

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
            "params": dict(sorted(self.params.items())),
            "inputs": list(self.fingerprints),
        }


def _rec(statement, lhs, rhs, pmfs=(), children=(), tol=SLACK_TOL, **params) -> BoundCheckRecord:
    return BoundCheckRecord(
        statement,
        float(lhs),
        float(rhs),
        {k: v for k, v in params.items() if v is not None},
        tuple(p.digest for p in pmfs),
        tuple(children),
        tol,
    )


def _require_log_concave(*pmfs: DiscretePmf) -> None:
    for p in pmfs:
        verdict = is_log_concave(p)
        if not verdict:
            raise AssumptionError(f"{p!r} is not log-concave ({verdict.first_violation})")


def _require_centered(*pmfs: DiscretePmf) -> None:
    for p in pmfs:
        if abs(p.moments.mean) > CENTER_TOL:
            raise AssumptionError(f"{p!r} is not centered (mean {p.moments.mean!r})")


def _require_unit_variance(p: DiscretePmf) -> None:
    if p.moments.variance > 1.0 + VARIANCE_TOL:
        raise AssumptionError(f"{p!r} has variance {p.moments.variance!r} > 1")


def _require_support_inclusion(mu: DiscretePmf, nu: DiscretePmf) -> None:
    bad = support_violations(mu, nu)
    if bad.size:
        raise AssumptionError(f"support of mu is not inside support of nu (e.g. k = {int(bad[0])})")


def _gamma_root(beta: float) -> float:
    """Gamma(beta + 1) ** (1 / beta)."""
    return math.exp(math.lgamma(beta + 1.0) / beta)


def _xlog(x: float, k: float) -> float:
    """x * log(k / x) with the limit 0 at x = 0."""
    return 0.0 if x == 0 else x * math.log(k / x)


# ---------------------------------------------------------------------------
# preliminaries on a single log-concave pmf


def check_sym(pmf: DiscretePmf) -> BoundCheckRecord:
    """|X| is log-concave for symmetric log-concave X.

    lhs is max_k q(k-1) q(k+1) / q(k)^2 for the pmf q of |X|; rhs is 1.
    """
    _require_log_concave(pmf)
    q = abs_value_transform(pmf)
    lhs = max_log_concavity_ratio(q) if not q.has_interior_zero else math.inf
    return _rec("sym", lhs, 1.0, [pmf])


def check_moment_lemma(pmf: DiscretePmf, beta: float) -> BoundCheckRecord:
    """E[|X - EX|^beta]^(1/beta) <= Gamma(beta+1)^(1/beta) (2 E|X - EX| + 1).

    When the support lies in the nonnegative integers the sharper statement
    E[X^beta]^(1/beta) <= Gamma(beta+1)^(1/beta) (E[X] + 1) is attached as a child.
    """
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta!r}")
    _require_log_concave(pmf)
    m = pmf.moments
    lhs = m.abs_moment(beta) ** (1.0 / beta)
    rhs = _gamma_root(beta) * (2.0 * m.mean_abs_dev + 1.0)
    children = []
    if pmf.lo >= 0:
        raw = math.fsum((pmf.weights * pmf.points.astype(float) ** beta).tolist()) ** (1.0 / beta)
        children.append(_rec("moment-lem/nat", raw, _gamma_root(beta) * (m.mean + 1.0), [pmf], beta=beta))
    return _rec("moment-lem", lhs, rhs, [pmf], children, beta=beta)


def _tail_at_least(pmf: DiscretePmf, center: float, t: float) -> float:
    d = np.abs(pmf.points - center)
    return math.fsum(pmf.weights[d >= t].tolist())


def check_concentration(pmf: DiscretePmf, t: float) -> BoundCheckRecord:
    """P(|X - EX| >= t) <= 2 exp(-t / (2 (2 E|X - EX| + 1))).

    Child: the moment-generating waypoint E[exp(lam |X - EX|)] <= 2 at
    lam = 1 / (2 (2 E|X - EX| + 1)).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    _require_log_concave(pmf)
    m = pmf.moments
    scale = 2.0 * (2.0 * m.mean_abs_dev + 1.0)
    lhs = _tail_at_least(pmf, m.mean, t)
    rhs = 2.0 * math.exp(-t / scale)
    lam = 1.0 / scale
    mgf = math.fsum((pmf.weights * np.exp(lam * np.abs(pmf.points - m.mean))).tolist())
    child = _rec("concentration-lem/mgf", mgf, 2.0, [pmf], lam=lam)
    return _rec("concentration-lem", lhs, rhs, [pmf], [child], t=t)


def check_noncentered_tail(pmf: DiscretePmf, t: float) -> BoundCheckRecord:
    """P(|X| >= t) <= 2 exp(-t / s) exp(|EX| / s) with s = 2 (2 E|X - EX| + 1)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    _require_log_concave(pmf)
    m = pmf.moments
    s = 2.0 * (2.0 * m.mean_abs_dev + 1.0)
    lhs = _tail_at_least(pmf, 0.0, t)
    rhs = 2.0 * math.exp(-t / s) * math.exp(abs(m.mean) / s)
    return _rec("noncentered-tail", lhs, rhs, [pmf], t=t)


def check_maximum_bound(pmf: DiscretePmf) -> BoundCheckRecord:
    """sqrt(1 + Var) <= 1 / max p <= sqrt(1 + 12 Var); the upper side is the parent."""
    _require_log_concave(pmf)
    m = pmf.moments
    inv = 1.0 / m.max_pmf
    lower = _rec("maximum-bound/lower", math.sqrt(1.0 + m.variance), inv, [pmf])
    return _rec("maximum-bound", inv, math.sqrt(1.0 + 12.0 * m.variance), [pmf], [lower])


def check_entropy_bound(pmf: DiscretePmf) -> BoundCheckRecord:
    """H(X) <= 1/2 log(2 pi e (Var + 1/12)); holds for every integer pmf."""
    m = pmf.moments
    rhs = 0.5 * math.log(2.0 * math.pi * math.e * (m.variance + 1.0 / 12.0))
    return _rec("bound-ent", m.entropy, rhs, [pmf])


def _log_squared(pmf: DiscretePmf) -> float:
    w = pmf.weights[pmf.weights > 0]
    return math.fsum((w * np.log(w) ** 2).tolist())


def check_log_squared_bound(pmf: DiscretePmf) -> BoundCheckRecord:
    """E[log^2 p(X)] <= 4 (4 e^-2 + 1 + H^2 / max p)."""
    _require_log_concave(pmf)
    m = pmf.moments
    rhs = 4.0 * (4.0 * math.exp(-2.0) + 1.0 + m.entropy**2 / m.max_pmf)
    return _rec("second-bound", _log_squared(pmf), rhs, [pmf])


def check_iso_remark(pmf: DiscretePmf, beta: float = 2.0, t: float = 1.0) -> list[BoundCheckRecord]:
    """The five numeric bounds for log-concave pmfs with variance at most 1."""
    _require_log_concave(pmf)
    _require_unit_variance(pmf)
    m = pmf.moments
    return [
        _rec("second-iso/moment", m.abs_moment(beta) ** (1.0 / beta), 3.0 * _gamma_root(beta), [pmf], beta=beta),
        _rec("second-iso/concentration", _tail_at_least(pmf, m.mean, t), 2.0 * math.exp(-t / 6.0), [pmf], t=t),
        _rec("second-iso/infinity", 1.0 / m.max_pmf, math.sqrt(13.0), [pmf]),
        _rec("second-iso/entropy", m.entropy, 1.5, [pmf]),
        _rec("second-iso/varent", _log_squared(pmf), 39.0, [pmf]),
    ]


# ---------------------------------------------------------------------------
# Wasserstein theorems


def _first_abs_moments(mu: DiscretePmf, nu: DiscretePmf) -> tuple[float, float]:
    ex = math.fsum((mu.weights * np.abs(mu.points)).tolist())
    ey = math.fsum((nu.weights * np.abs(nu.points)).tolist())
    return ex, ey


def theorem_w1_rhs(mu: DiscretePmf, nu: DiscretePmf) -> BoundCheckRecord:
    """W1 <= 4 d_LP M log(4e S / (M d_LP)), M = 2 max(E|X|, E|Y|) + 1, S = E|X| + E|Y| + 1.

    Child when E|X|, E|Y| <= 1: W1 <= 12 d_LP log(4e / d_LP).
    """
    _require_log_concave(mu, nu)
    _require_centered(mu, nu)
    ex, ey = _first_abs_moments(mu, nu)
    big_m = 2.0 * max(ex, ey) + 1.0
    s = ex + ey + 1.0
    d = levy_prokhorov(mu, nu)
    lhs = wasserstein(1, mu, nu)
    rhs = 4.0 * big_m * _xlog(d, 4.0 * math.e * s / big_m)
    children = []
    if ex <= 1.0 and ey <= 1.0:
        children.append(_rec("w1/universal", lhs, 12.0 * _xlog(d, 4.0 * math.e), [mu, nu], d_lp=d))
    return _rec("w1", lhs, rhs, [mu, nu], children, d_lp=d, ex=ex, ey=ey)


def theorem_wp_rhs(p: float, q: float, mu: DiscretePmf, nu: DiscretePmf) -> BoundCheckRecord:
    """W_q^q <= 2 W_p^p + W_p^p log^(q-p)(K / W_p^p) 8^(q-p) M^(q-p).

    K = 2^q S^q sqrt(Gamma(2q + 1)) with S, M as in :func:`theorem_w1_rhs`.
    Children: the side condition W_p^p <= K (the log is nonnegative) and,
    when E|X|, E|Y| <= 1, the universal form
    W_q^q <= 24^(q-p) W_p^p log^(q-p)(6^q sqrt(Gamma(2q+1)) / W_p^p) + 2 W_p^p.
    """
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got p={p!r}, q={q!r}")
    _require_log_concave(mu, nu)
    _require_centered(mu, nu)
    ex, ey = _first_abs_moments(mu, nu)
    big_m = 2.0 * max(ex, ey) + 1.0
    s = ex + ey + 1.0
    wpp = transport_cost(p, mu, nu)
    wqq = transport_cost(q, mu, nu)
    sqrt_gamma = math.exp(0.5 * math.lgamma(2.0 * q + 1.0))
    k = 2.0**q * s**q * sqrt_gamma
    e = q - p
    tag = f"wp[{p:g},{q:g}]"

    def log_pow(arg: float) -> float:
        return 1.0 if e == 0 else math.log(arg) ** e

    if wpp == 0:
        rhs = 0.0
        uni = 0.0
    else:
        rhs = 2.0 * wpp + wpp * log_pow(k / wpp) * 8.0**e * big_m**e
        uni = 24.0**e * wpp * log_pow(6.0**q * sqrt_gamma / wpp) + 2.0 * wpp
    children = [_rec(f"{tag}/side-condition", wpp, k, [mu, nu], p=p, q=q)]
    if ex <= 1.0 and ey <= 1.0:
        children.append(_rec(f"{tag}/universal", wqq, uni, [mu, nu], p=p, q=q))
    return _rec(tag, wqq, rhs, [mu, nu], children, p=p, q=q, ex=ex, ey=ey)


# ---------------------------------------------------------------------------
# reference class and divergences


def q_class_membership(nu: DiscretePmf, params: QClassParams) -> bool:
    for k, w in nu.items():
        if w <= 0:
            continue
        bound = params.a * k * k + math.log(params.c)
        if -math.log(w) > bound + 1e-12 * max(1.0, abs(bound)):
            return False
    return True


def q_class_fit(nu: DiscretePmf, a: float) -> QClassParams:
    """Smallest c (at least 1) with nu in Q(a, c)."""
    if not a > 0:
        raise ValueError(f"a must be positive, got {a!r}")
    w = nu.weights
    k = nu.points.astype(float)[w > 0]
    log_c = float(np.max(-np.log(w[w > 0]) - a * k * k))
    return QClassParams(a, max(1.0, math.exp(log_c)))


def _require_membership(nu: DiscretePmf, params: QClassParams) -> None:
    if not q_class_membership(nu, params):
        raise AssumptionError(f"{nu!r} is not in Q({params.a!r}, {params.c!r})")


def default_r_grid(mu: DiscretePmf, params: QClassParams, points: int = 64) -> np.ndarray:
    """Log-spaced R from c to c * exp(36 a (1 + Var(mu)))."""
    top = 36.0 * params.a * (1.0 + mu.moments.variance)
    return params.c * np.exp(np.linspace(0.0, top, points))


def fdiv_tv_bound(
    f: ConvexFunction,
    mu: DiscretePmf,
    nu: DiscretePmf,
    params: QClassParams,
    r_grid: Sequence[float] | None = None,
) -> float:
    """Grid minimum over R >= c of

    (max(f(0), 0) + f(R) / (R - 1)) tv_sum
        + sqrt(E[(f(W)/W)^2 1{W > 1}] P(|Y| > sqrt(log(R/c) / a)))

    with Y ~ mu and W = p(Y) / q(Y).  Grid points R <= 1 are skipped (the
    f(R)/(R-1) factor is undefined there).
    """
    _require_membership(nu, params)
    _require_support_inclusion(mu, nu)
    grid = default_r_grid(mu, params) if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(grid < params.c):
        raise AssumptionError("every grid point R must satisfy R >= c")
    d = tv_sum(mu, nu)
    pts = mu.points[mu.weights > 0]
    pw = mu.weights[mu.weights > 0]
    qw = np.array([nu.prob(k) for k in pts])
    wr = pw / qw
    big = wr > 1
    fw = np.asarray(f(wr[big]), dtype=float)
    second = math.fsum((pw[big] * (fw / wr[big]) ** 2).tolist())
    absy = np.abs(pts).astype(float)
    best = math.inf
    for r in grid.tolist():
        if r <= 1.0:
            continue
        radius = math.sqrt(math.log(r / params.c) / params.a)
        tail = math.fsum(pw[absy > radius].tolist())
        val = (max(f.f0, 0.0) + float(f(r)) / (r - 1.0)) * d + math.sqrt(second * tail)
        best = min(best, val)
    return best


def check_fdiv_lemma(
    f: ConvexFunction,
    mu: DiscretePmf,
    nu: DiscretePmf,
    params: QClassParams,
    r_grid: Sequence[float] | None = None,
) -> BoundCheckRecord:
    bound = fdiv_tv_bound(f, mu, nu, params, r_grid)
    return _rec(f"f-div[{f.name}]", f_divergence(f, mu, nu), bound, [mu, nu], a=params.a, c=params.c)


def theorem_kl_rhs(mu: DiscretePmf, nu: DiscretePmf, params: QClassParams) -> BoundCheckRecord:
    """D(mu || nu) <= d (32 a (2 sqrt(Var) + 1)^2 log^2(sqrt(2)(A + B) / d) + 2 log c + 1)

    with d = tv_sum, Var = Var(mu), A = log c + 10a + 41a Var and
    B = 5/2 + (1 + 12 Var)^(1/4) log(2 pi e (Var + 1/12)).  Child for centered
    mu with Var <= 1: d (288 a log^2(sqrt(2)(9 + log c + 51 a) / d) + 2 log c + 1).
    """
    a, c = params.a, params.c
    if c < 2:
        raise AssumptionError(f"the divergence bound needs c >= 2, got {c!r}")
    _require_log_concave(mu)
    _require_support_inclusion(mu, nu)
    _require_membership(nu, params)
    var = mu.moments.variance
    d = tv_sum(mu, nu)
    lhs = kl(mu, nu)
    big_a = math.log(c) + 10.0 * a + 41.0 * a * var
    big_b = 2.5 + (1.0 + 12.0 * var) ** 0.25 * math.log(2.0 * math.pi * math.e * (var + 1.0 / 12.0))
    if d == 0:
        rhs = 0.0
    else:
        lg = math.log(math.sqrt(2.0) * (big_a + big_b) / d)
        rhs = d * (32.0 * a * (2.0 * math.sqrt(var) + 1.0) ** 2 * lg**2 + 2.0 * math.log(c) + 1.0)
    children = []
    if abs(mu.moments.mean) <= CENTER_TOL and var <= 1.0 + VARIANCE_TOL:
        if d == 0:
            uni = 0.0
        else:
            lg = math.log(math.sqrt(2.0) * (9.0 + math.log(c) + 51.0 * a) / d)
            uni = d * (288.0 * a * lg**2 + 2.0 * math.log(c) + 1.0)
        children.append(_rec("divergence/universal", lhs, uni, [mu, nu], a=a, c=c))
    return _rec("divergence", lhs, rhs, [mu, nu], children, a=a, c=c, tv=d, var=var)


def theorem_chi2_rhs(mu: DiscretePmf, nu: DiscretePmf, params: QClassParams) -> BoundCheckRecord:
    """chi2(mu || nu) <= c (d + sqrt d) + c sqrt(E e^{2aY^2}) sqrt 2 exp(-(1/12) sqrt(log(1 + 1/sqrt d) / a))."""
    a, c = params.a, params.c
    _require_log_concave(mu)
    _require_centered(mu)
    _require_unit_variance(mu)
    _require_support_inclusion(mu, nu)
    _require_membership(nu, params)
    d = tv_sum(mu, nu)
    lhs = chi2(mu, nu)
    w = mu.weights[mu.weights > 0]
    k = mu.points[mu.weights > 0].astype(float)
    log_mgf = float(logsumexp(np.log(w) + 2.0 * a * k * k))
    if d == 0:
        rhs = 0.0
    else:
        expo = -(1.0 / 12.0) * math.sqrt(math.log(1.0 + 1.0 / math.sqrt(d)) / a)
        tail = math.exp(math.log(c) + 0.5 * log_mgf + 0.5 * math.log(2.0) + expo)
        rhs = c * (d + math.sqrt(d)) + tail
    return _rec("chi2-theorem", lhs, rhs, [mu, nu], a=a, c=c, tv=d, log_mgf=log_mgf)


# ---------------------------------------------------------------------------
# classical relations


def known_relations_suite(mu: DiscretePmf, nu: DiscretePmf, orders: Iterable[float] = (1, 1.5, 2, 3)) -> list[BoundCheckRecord]:
    """Dudley sandwich, d_LP <= tv_sum, tv_sum/2 <= W1, W_p monotone in p,
    Pinsker and D <= log(1 + chi2) (the last two only when supp mu is inside supp nu)."""
    pm = [mu, nu]
    tv = tv_sum(mu, nu)
    lp = levy_prokhorov(mu, nu)
    bl, _ = bounded_lipschitz(mu, nu)
    orders = sorted(orders)
    ws = {p: wasserstein(p, mu, nu) for p in orders}
    out = [
        _rec("dudley-lower", 0.5 * bl, lp, pm),
        _rec("dudley-upper", lp, math.sqrt(1.5 * bl), pm),
        _rec("lp-le-tv", lp, tv, pm),
        _rec("half-tv-le-w1", 0.5 * tv, ws[orders[0]] if orders[0] == 1 else wasserstein(1, mu, nu), pm),
    ]
    for p, q in zip(orders, orders[1:]):
        out.append(_rec(f"wp-monotone[{p:g},{q:g}]", ws[p], ws[q], pm, p=p, q=q))
    if support_violations(mu, nu).size == 0:
        d_kl = kl(mu, nu)
        out.append(_rec("pinsker", tv, math.sqrt(2.0 * d_kl), pm))
        out.append(_rec("kl-le-log1p-chi2", d_kl, math.log1p(chi2(mu, nu)), pm))
    return out


def literal_tv_le_w1(mu: DiscretePmf, nu: DiscretePmf) -> BoundCheckRecord:
    """tv_sum <= W1 taken literally in the sum convention; fails e.g. for two adjacent point masses."""
    return _rec("tv-sum-le-w1-literal", tv_sum(mu, nu), wasserstein(1, mu, nu), [mu, nu])
