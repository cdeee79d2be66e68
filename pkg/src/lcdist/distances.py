"""Exact distances between finitely supported integer pmfs.

Conventions
-----------
Total variation is reported in the *sum* convention, ``tv_sum = sum_k |p(k) - q(k)|``
with values in [0, 2].  Half of it is the minimal miscoupling probability
``P(X != Y)``, which :func:`maximal_coupling` attains.

All routines work on the union of the two supports, so the cost is linear in
the support sizes and independent of the gap between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import SupportViolation
from .pmf import DiscretePmf, levels


def _union(mu: DiscretePmf, nu: DiscretePmf) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sorted union of the two support intervals with both weight vectors on it."""
    x = np.union1d(mu.points, nu.points)
    p = np.zeros(len(x))
    q = np.zeros(len(x))
    i = np.searchsorted(x, mu.lo)
    p[i : i + mu.size] = mu.weights
    j = np.searchsorted(x, nu.lo)
    q[j : j + nu.size] = nu.weights
    return x, p, q


def tv_sum(mu: DiscretePmf, nu: DiscretePmf) -> float:
    _, p, q = _union(mu, nu)
    return min(math.fsum(np.abs(p - q).tolist()), 2.0)


def _cdf_on(pmf: DiscretePmf, x: np.ndarray) -> np.ndarray:
    """cdf of ``pmf`` evaluated at the sorted integer points ``x``."""
    lev = levels(pmf)
    idx = np.clip(x - pmf.lo, -1, pmf.size - 1)
    out = np.where(idx >= 0, lev[np.maximum(idx, 0)], 0.0)
    return out


def w1_cdf(mu: DiscretePmf, nu: DiscretePmf) -> float:
    """W1 as the integral of |F_mu - F_nu| over the real line."""
    x, _, _ = _union(mu, nu)
    if len(x) < 2:
        return 0.0
    gap = np.abs(_cdf_on(mu, x) - _cdf_on(nu, x))[:-1]
    return math.fsum((gap * np.diff(x)).tolist())


def wasserstein(p: float, mu: DiscretePmf, nu: DiscretePmf) -> float:
    """W_p through the monotone quantile coupling."""
    cost = transport_cost(p, mu, nu)
    return cost if p == 1 else cost ** (1.0 / p)


def transport_cost(p: float, mu: DiscretePmf, nu: DiscretePmf) -> float:
    """W_p^p, the optimal value of E|X - Y|^p.

    The two cdf level sets are merged into breakpoints 0 = u_0 < ... < u_M = 1;
    on each interval (u_i, u_{i+1}] both quantile functions are constant.
    For p = 1 the result is cross-checked against the integral of |F - G|.
    """
    if not p >= 1:
        raise ValueError(f"order p must be >= 1, got {p!r}")
    a = levels(mu)
    b = levels(nu)
    u = np.union1d(a, b)
    width = np.diff(np.concatenate([[0.0], u]))
    ia = np.minimum(np.searchsorted(a, u, side="left"), mu.size - 1)
    ib = np.minimum(np.searchsorted(b, u, side="left"), nu.size - 1)
    disp = np.abs((mu.lo + ia) - (nu.lo + ib)).astype(np.float64)
    cost = math.fsum((disp**p * width).tolist())
    if p == 1:
        dual = w1_cdf(mu, nu)
        if abs(dual - cost) > 1e-9 * max(1.0, dual):
            raise ArithmeticError(f"quantile and cdf forms of W1 disagree: {cost!r} vs {dual!r}")
    return cost


def levy_prokhorov(mu: DiscretePmf, nu: DiscretePmf) -> float:
    """Levy-Prokhorov distance on the integer lattice.

    For eps in (0, 1] the open eps-neighbourhood of a set A meets the integers
    exactly in A itself (distinct integers are at distance >= 1), so the
    defining condition reads mu(A) <= nu(A) + eps for all A, i.e.
    eps >= sup_A (mu(A) - nu(A)) = tv_sum / 2 <= 1.  Any eps > 1 is larger
    than that, so the infimum is tv_sum / 2.
    """
    return min(0.5 * tv_sum(mu, nu), 1.0)


# ---------------------------------------------------------------------------
# bounded Lipschitz


@dataclass(frozen=True)
class LipschitzWitness:
    """Optimal test function g on the union support points.

    Between consecutive points the constraint is |g(x) - g(y)| <= |x - y|;
    linear interpolation extends g to the real line with ||g||_BL <= 1.
    """

    points: np.ndarray
    values: np.ndarray
    objective: float

    def __call__(self, k: int) -> float:
        i = int(np.searchsorted(self.points, k))
        if i < len(self.points) and self.points[i] == k:
            return float(self.values[i])
        if i == 0:
            return float(self.values[0])
        if i == len(self.points):
            return float(self.values[-1])
        x0, x1 = self.points[i - 1], self.points[i]
        g0, g1 = self.values[i - 1], self.values[i]
        return float(g0 + (g1 - g0) * (k - x0) / (x1 - x0))


_STATES = (-1, 0, 1)


def bounded_lipschitz(mu: DiscretePmf, nu: DiscretePmf) -> tuple[float, LipschitzWitness]:
    """Exact d_BL by dynamic programming over g(k) in {-1, 0, 1}.

    The feasible set {|g_k| <= 1, |g_{k+1} - g_k| <= 1} has a totally
    unimodular constraint matrix (identity rows plus consecutive differences),
    so every vertex is integral and a linear objective is maximized on one.
    Points with no mass on either side only relax the step constraint, so the
    chain runs over the union support with allowed jump |x_{i+1} - x_i|.
    """
    x, p, q = _union(mu, nu)
    d = (p - q).tolist()
    n = len(x)
    gaps = np.diff(x).tolist()
    value = {s: s * d[0] for s in _STATES}
    back: list[dict[int, int]] = []
    for i in range(1, n):
        step = gaps[i - 1]
        new, arg = {}, {}
        for s in _STATES:
            best_prev = max((t for t in _STATES if abs(s - t) <= step), key=lambda t: (value[t], -abs(t)))
            new[s] = value[best_prev] + s * d[i]
            arg[s] = best_prev
        value = new
        back.append(arg)
    s = max(_STATES, key=lambda t: (value[t], -abs(t)))
    g = [s]
    for arg in reversed(back):
        s = arg[s]
        g.append(s)
    g.reverse()
    objective = math.fsum(gi * di for gi, di in zip(g, d))
    return objective, LipschitzWitness(x.copy(), np.array(g, dtype=np.float64), objective)


# ---------------------------------------------------------------------------
# f-divergences


@dataclass(frozen=True)
class ConvexFunction:
    """Convex f on [0, inf) with f(1) = 0.

    ``f0`` is the limit f(0+); ``slope_inf`` is lim f(x)/x as x -> inf, or
    None when it is infinite (then mass of mu outside supp(nu) makes the
    divergence infinite).
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    f0: float
    slope_inf: float | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x > 0, self.f(np.where(x > 0, x, 1.0)), self.f0)
        return out if out.ndim else float(out)


KL = ConvexFunction("kl", lambda x: x * np.log(x), 0.0)
CHI2 = ConvexFunction("chi2", lambda x: (x - 1.0) ** 2, 1.0)
TV = ConvexFunction("tv", lambda x: np.abs(x - 1.0), 1.0, slope_inf=1.0)
HELLINGER = ConvexFunction("hellinger", lambda x: (np.sqrt(x) - 1.0) ** 2, 1.0, slope_inf=1.0)

FUNCTIONS: Mapping[str, ConvexFunction] = {f.name: f for f in (KL, CHI2, TV, HELLINGER)}


def support_violations(mu: DiscretePmf, nu: DiscretePmf) -> np.ndarray:
    """Points where mu has mass and nu has none."""
    x, p, q = _union(mu, nu)
    return x[(p > 0) & (q == 0)]


def f_divergence(f: ConvexFunction, mu: DiscretePmf, nu: DiscretePmf, on_violation: str = "raise") -> float:
    """sum_k nu(k) f(mu(k) / nu(k)) with the usual limiting conventions.

    Where nu(k) = 0 < mu(k) the term is mu(k) * lim f(x)/x; when that slope is
    infinite a :class:`SupportViolation` is raised, or ``inf`` returned if
    ``on_violation="inf"``.
    """
    x, p, q = _union(mu, nu)
    outside = (p > 0) & (q == 0)
    extra = 0.0
    if np.any(outside):
        if f.slope_inf is None:
            if on_violation == "inf":
                return math.inf
            raise SupportViolation(x[outside])
        extra = f.slope_inf * math.fsum(p[outside].tolist())
    on = q > 0
    terms = q[on] * f(p[on] / q[on])
    return max(math.fsum(terms.tolist()) + extra, 0.0)


def kl(mu: DiscretePmf, nu: DiscretePmf, on_violation: str = "raise") -> float:
    """Kullback-Leibler divergence D(mu || nu) in nats."""
    x, p, q = _union(mu, nu)
    if np.any((p > 0) & (q == 0)):
        if on_violation == "inf":
            return math.inf
        raise SupportViolation(x[(p > 0) & (q == 0)])
    m = p > 0
    # p log(p/q) written as p (log p - log q) keeps point-mass cases exact
    terms = p[m] * (np.log(p[m]) - np.log(q[m]))
    return max(math.fsum(terms.tolist()), 0.0)


def chi2(mu: DiscretePmf, nu: DiscretePmf, on_violation: str = "raise") -> float:
    x, p, q = _union(mu, nu)
    if np.any((p > 0) & (q == 0)):
        if on_violation == "inf":
            return math.inf
        raise SupportViolation(x[(p > 0) & (q == 0)])
    on = q > 0
    p, q = p[on], q[on]
    r = p / q
    # q (r-1)^2 overflows for r beyond ~1e154 even when the term is finite
    big = r > 1e150
    terms = np.where(big, (p - q) * ((p - q) / np.where(big, q, 1.0)), q * (np.where(big, 1.0, r) - 1.0) ** 2)
    return max(math.fsum(terms.tolist()), 0.0)


# ---------------------------------------------------------------------------
# couplings


@dataclass(frozen=True)
class CouplingPmf:
    pairs: Mapping[tuple[int, int], float]
    left: DiscretePmf
    right: DiscretePmf = field(repr=False)

    def __post_init__(self):
        total = math.fsum(self.pairs.values())
        if any(v < 0 for v in self.pairs.values()) or abs(total - 1.0) > 1e-9:
            raise ValueError("coupling probabilities must be nonnegative and sum to 1")
        rows: dict[int, list[float]] = {}
        cols: dict[int, list[float]] = {}
        for (j, k), v in self.pairs.items():
            rows.setdefault(j, []).append(v)
            cols.setdefault(k, []).append(v)
        for marg, sums in ((self.left, rows), (self.right, cols)):
            for k, w in marg.items():
                if abs(math.fsum(sums.get(k, [])) - w) > 1e-9:
                    raise ValueError(f"coupling marginal mismatch at k = {k}")
            if any(k < marg.lo or k > marg.hi for k in sums):
                raise ValueError("coupling puts mass outside a marginal's support")

    def prob_unequal(self) -> float:
        return math.fsum(v for (j, k), v in self.pairs.items() if j != k)

    def distance_masses(self) -> dict[int, float]:
        out: dict[int, list[float]] = {}
        for (j, k), v in self.pairs.items():
            if v > 0:
                out.setdefault(abs(j - k), []).append(v)
        return {d: math.fsum(vs) for d, vs in sorted(out.items())}


def kyfan(coupling: CouplingPmf) -> float:
    """inf{eps > 0 : P(|X - Y| > eps) < eps} for the coupled pair.

    G(eps) = P(|X - Y| > eps) is a right-continuous step function, constant on
    [t_i, t_{i+1}) between consecutive distinct distances.  On such a piece
    with value g the feasible eps are those > g, so the first piece with
    g < t_{i+1} gives the answer max(t_i, g).
    """
    masses = coupling.distance_masses()
    jumps = [d for d in masses if d > 0]
    tail = math.fsum(v for d, v in masses.items() if d > 0)
    starts = [0.0] + [float(d) for d in jumps]
    for i, t in enumerate(starts):
        if i > 0:
            tail = max(tail - masses[jumps[i - 1]], 0.0)
        end = starts[i + 1] if i + 1 < len(starts) else math.inf
        if tail < end:
            return min(max(t, tail), 1.0)
    return 1.0  # unreachable: the last piece has G = 0


def maximal_coupling(mu: DiscretePmf, nu: DiscretePmf) -> CouplingPmf:
    """min(p, q) on the diagonal; residual masses coupled comonotonically."""
    x, p, q = _union(mu, nu)
    m = np.minimum(p, q)
    pairs: dict[tuple[int, int], float] = {}
    for k, v in zip(x.tolist(), m.tolist()):
        if v > 0:
            pairs[(k, k)] = v
    rp = [(k, v) for k, v in zip(x.tolist(), (p - m).tolist()) if v > 0]
    rq = [(k, v) for k, v in zip(x.tolist(), (q - m).tolist()) if v > 0]
    i = j = 0
    ap = rp[0][1] if rp else 0.0
    aq = rq[0][1] if rq else 0.0
    while i < len(rp) and j < len(rq):
        v = min(ap, aq)
        if v > 0:
            key = (rp[i][0], rq[j][0])
            pairs[key] = pairs.get(key, 0.0) + v
        ap -= v
        aq -= v
        if ap <= aq:
            i += 1
            ap = rp[i][1] if i < len(rp) else 0.0
        else:
            j += 1
            aq = rq[j][1] if j < len(rq) else 0.0
    return CouplingPmf(pairs, mu, nu)


def independent_coupling(mu: DiscretePmf, nu: DiscretePmf) -> CouplingPmf:
    pairs = {(j, k): a * b for j, a in mu.items() for k, b in nu.items() if a * b > 0}
    return CouplingPmf(pairs, mu, nu)


def quantile_coupling(mu: DiscretePmf, nu: DiscretePmf) -> CouplingPmf:
    """The comonotone coupling that attains every W_p."""
    a, b = levels(mu), levels(nu)
    u = np.union1d(a, b)
    width = np.diff(np.concatenate([[0.0], u]))
    ia = np.minimum(np.searchsorted(a, u, side="left"), mu.size - 1)
    ib = np.minimum(np.searchsorted(b, u, side="left"), nu.size - 1)
    pairs: dict[tuple[int, int], float] = {}
    for j, k, w in zip((mu.lo + ia).tolist(), (nu.lo + ib).tolist(), width.tolist()):
        if w > 0:
            pairs[(j, k)] = pairs.get((j, k), 0.0) + w
    return CouplingPmf(pairs, mu, nu)
