"""Slow reference computations written straight from the definitions.

Nothing here imports from :mod:`lcdist.distances`; only the pmf accessors
(``items``, ``prob``, ``lo``/``hi``) are shared with the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InstanceTooLarge, SupportViolation
from .pmf import DiscretePmf

OT_MAX_CELLS = 400
LP_MAX_POINTS = 16
BL_MAX_HULL = 12


@dataclass(frozen=True)
class OracleReport:
    oracle: str
    fingerprint: str
    fast: float
    reference: float
    tol: float

    @property
    def abs_gap(self) -> float:
        return abs(self.fast - self.reference)

    @property
    def rel_gap(self) -> float:
        return self.abs_gap / max(abs(self.reference), 1e-300)

    @property
    def passed(self) -> bool:
        return self.abs_gap <= self.tol


def report(oracle: str, mu: DiscretePmf, nu: DiscretePmf, fast: float, reference: float, tol: float) -> OracleReport:
    return OracleReport(oracle, f"{mu.digest}:{nu.digest}", float(fast), float(reference), tol)


def _masses(pmf: DiscretePmf) -> list[tuple[int, float]]:
    return [(k, w) for k, w in pmf.items() if w > 0]


# ---------------------------------------------------------------------------
# transportation problem


def _tree_path(basis: set[tuple[int, int]], m: int, n: int, start: int, goal: int) -> list[int]:
    """Node path in the basis spanning tree (rows 0..m-1, columns m..m+n-1)."""
    adj: dict[int, list[int]] = {v: [] for v in range(m + n)}
    for i, j in basis:
        adj[i].append(m + j)
        adj[m + j].append(i)
    prev = {start: -1}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == goal:
            break
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                stack.append(w)
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]


def transport_simplex(supply: list[float], demand: list[float], cost: np.ndarray, max_iter: int = 100_000) -> float:
    """Minimum of sum x_ij c_ij over the transportation polytope.

    North-west-corner start, u-v potentials, Bland's rule for the entering
    and leaving cells (terminates under degeneracy).
    """
    m, n = len(supply), len(demand)
    a, b = list(supply), list(demand)
    x: dict[tuple[int, int], float] = {}
    i = j = 0
    while True:
        v = max(min(a[i], b[j]), 0.0)
        x[(i, j)] = v
        a[i] -= v
        b[j] -= v
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif a[i] <= b[j]:
            i += 1
        else:
            j += 1
    # leftover rounding goes to the last cell
    x[(m - 1, n - 1)] += max(min(a[m - 1], b[n - 1]), 0.0)

    for _ in range(max_iter):
        basis = set(x)
        u: list[float | None] = [None] * m
        w: list[float | None] = [None] * n
        u[0] = 0.0
        changed = True
        while changed:
            changed = False
            for (r, c) in basis:
                if u[r] is not None and w[c] is None:
                    w[c] = cost[r, c] - u[r]
                    changed = True
                elif w[c] is not None and u[r] is None:
                    u[r] = cost[r, c] - w[c]
                    changed = True
        scale = max(1.0, float(np.abs(cost).max()))
        entering = None
        for r in range(m):
            for c in range(n):
                if (r, c) not in basis and cost[r, c] - u[r] - w[c] < -1e-12 * scale:
                    entering = (r, c)
                    break
            if entering:
                break
        if entering is None:
            return math.fsum(v * cost[r, c] for (r, c), v in x.items())
        r0, c0 = entering
        nodes = _tree_path(basis, m, n, m + c0, r0)  # column -> ... -> row closes the cycle
        cells = [(r0, c0)]
        for s, t in zip(nodes, nodes[1:]):
            cells.append((t, s - m) if s >= m else (s, t - m))
        minus = cells[1::2]
        theta = min(x[cell] for cell in minus)
        leaving = min(cell for cell in minus if x[cell] == theta)
        for k, cell in enumerate(cells):
            if k % 2 == 0:
                x[cell] = x.get(cell, 0.0) + theta
            else:
                x[cell] -= theta
        del x[leaving]
        for cell in minus:
            if cell in x and x[cell] < 0:
                x[cell] = 0.0
    raise RuntimeError("transportation simplex did not converge")


def ot_bruteforce(p: float, mu: DiscretePmf, nu: DiscretePmf) -> float:
    """W_p as an explicit minimum over couplings."""
    if p < 1:
        raise ValueError(f"order p must be >= 1, got {p!r}")
    left, right = _masses(mu), _masses(nu)
    if len(left) * len(right) > OT_MAX_CELLS:
        raise InstanceTooLarge(f"{len(left)}x{len(right)} exceeds {OT_MAX_CELLS} cells")
    cost = np.array([[abs(j - k) ** p for k, _ in right] for j, _ in left], dtype=np.float64)
    total = transport_simplex([w for _, w in left], [w for _, w in right], cost)
    return max(total, 0.0) ** (1.0 / p)


# ---------------------------------------------------------------------------
# Levy-Prokhorov by subset enumeration


def lp_bruteforce(mu: DiscretePmf, nu: DiscretePmf) -> float:
    """Levy-Prokhorov distance by enumerating every subset A of the joint support.

    For eps in the band (r, r+1], r a nonnegative integer, the open
    eps-neighbourhood of A contains exactly the integers within distance r of
    A.  The condition mu(A) <= nu(A^eps) + eps for all A therefore holds in that
    band iff eps >= f(r) = max_A (mu(A) - nu(A (+) r)), and the band contributes
    the infimum max(r, f(r)) when f(r) <= r + 1.
    """
    pts = sorted({k for k, w in mu.items() if w > 0} | {k for k, w in nu.items() if w > 0})
    n = len(pts)
    if n > LP_MAX_POINTS:
        raise InstanceTooLarge(f"joint support has {n} > {LP_MAX_POINTS} points")
    pm = np.array([mu.prob(k) for k in pts])
    pn = np.array([nu.prob(k) for k in pts])
    masks = ((np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)
    mass_mu = masks @ pm
    xs = np.array(pts)
    dist = np.abs(xs[:, None] - xs[None, :])
    best = math.inf
    r = 0
    while r < best:
        reach = (masks @ (dist <= r).astype(np.float64)) > 0
        f = float(np.max(mass_mu - reach @ pn))
        if f <= r + 1:
            best = min(best, max(float(r), f))
        if r > xs[-1] - xs[0]:
            break
        r += 1
    return best


# ---------------------------------------------------------------------------
# bounded Lipschitz by vertex enumeration


def _chains(n: int):
    """All g in {-1, 0, 1}^n with |g[i+1] - g[i]| <= 1."""
    out = [[s] for s in (-1, 0, 1)]
    for _ in range(n - 1):
        out = [g + [s] for g in out for s in (-1, 0, 1) if abs(s - g[-1]) <= 1]
    return out


def bl_bruteforce(mu: DiscretePmf, nu: DiscretePmf) -> float:
    lo, hi = min(mu.lo, nu.lo), max(mu.hi, nu.hi)
    n = hi - lo + 1
    if n > BL_MAX_HULL:
        raise InstanceTooLarge(f"hull of {n} points exceeds {BL_MAX_HULL}")
    d = [mu.prob(k) - nu.prob(k) for k in range(lo, hi + 1)]
    return max(math.fsum(g * dk for g, dk in zip(gs, d)) for gs in _chains(n))


def bl_product_enumeration(mu: DiscretePmf, nu: DiscretePmf) -> float:
    """Same as :func:`bl_bruteforce` but filtering the full cube {-1,0,1}^n."""
    lo, hi = min(mu.lo, nu.lo), max(mu.hi, nu.hi)
    n = hi - lo + 1
    if n > 9:
        raise InstanceTooLarge("cube enumeration is limited to 9 points")
    d = [mu.prob(k) - nu.prob(k) for k in range(lo, hi + 1)]
    best = -math.inf
    for gs in product((-1, 0, 1), repeat=n):
        if all(abs(s - t) <= 1 for s, t in zip(gs, gs[1:])):
            best = max(best, math.fsum(g * dk for g, dk in zip(gs, d)))
    return best


# ---------------------------------------------------------------------------
# f-divergence re-summation


def fdiv_bruteforce(f, mu: DiscretePmf, nu: DiscretePmf) -> float:
    """sum_k nu(k) f(mu(k)/nu(k)), terms accumulated in increasing magnitude.

    ``f`` needs ``f0`` (limit at 0+) and ``slope_inf`` (None when infinite)
    attributes and must accept a scalar.
    """
    pts = sorted({k for k, w in mu.items() if w > 0} | {k for k, w in nu.items() if w > 0})
    terms = []
    for k in pts:
        a, b = mu.prob(k), nu.prob(k)
        if b == 0:
            if f.slope_inf is None:
                raise SupportViolation([k])
            terms.append(a * f.slope_inf)
        elif a == 0:
            terms.append(b * f.f0)
        else:
            terms.append(b * float(f(a / b)))
    total = 0.0
    for t in sorted(terms, key=abs):
        total += t
    return total
