"""Log-concavity tests, transforms and a random log-concave generator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pmf import DiscretePmf, make_pmf

# log-weights below max - _LOG_FLOOR are dropped so no weight is subnormal
_LOG_FLOOR = 650.0
MAX_GENERATED_SIZE = 10_000


@dataclass(frozen=True)
class Violation:
    k: int
    lhs: float  # p(k)^2
    rhs: float  # p(k-1) p(k+1)


@dataclass(frozen=True)
class LogConcavityVerdict:
    is_log_concave: bool
    first_violation: Violation | None
    has_interior_zero: bool

    def __bool__(self) -> bool:
        return self.is_log_concave


def is_log_concave(pmf: DiscretePmf, tol: float = 1e-12) -> LogConcavityVerdict:
    """Check p(k)^2 >= (1 - tol) p(k-1) p(k+1) at every interior k.

    The comparison is done on logs so that products of tiny weights do not
    underflow.  Any interior zero breaks contiguity of the support.
    """
    w = pmf.weights
    zero = bool(np.any(w == 0.0))
    if len(w) < 3:
        return LogConcavityVerdict(not zero, None, zero)
    with np.errstate(divide="ignore"):
        lw = np.log(w)
    lhs = 2.0 * lw[1:-1]
    rhs = lw[:-2] + lw[2:] + math.log1p(-tol)
    bad = np.flatnonzero(lhs < rhs)
    violation = None
    if bad.size:
        i = int(bad[0]) + 1
        violation = Violation(pmf.lo + i, float(w[i] * w[i]), float(w[i - 1] * w[i + 1]))
    return LogConcavityVerdict(violation is None and not zero, violation, zero)


def max_log_concavity_ratio(pmf: DiscretePmf) -> float:
    """max over interior k of p(k-1) p(k+1) / p(k)^2 (0 when there is no interior point).

    A pmf with no interior zeros is log-concave iff this is <= 1.
    """
    w = pmf.weights
    if len(w) < 3:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        lw = np.log(w)
        r = lw[:-2] + lw[2:] - 2.0 * lw[1:-1]
    if np.any(np.isnan(r)):
        return math.inf
    return float(np.exp(r.max()))


def abs_value_transform(pmf: DiscretePmf) -> DiscretePmf:
    """Distribution of |X|: q(0) = p(0), q(k) = p(k) + p(-k) for k >= 1."""
    top = max(abs(pmf.lo), abs(pmf.hi))
    q = np.zeros(top + 1)
    for k, w in pmf.items():
        q[abs(k)] += w
    meta = {"family": "abs", "source": dict(pmf.meta)}
    return make_pmf(0, q, normalize=True, meta=meta)


def difference_pmf(pmf: DiscretePmf) -> DiscretePmf:
    """Distribution of X - Y for independent copies X, Y."""
    w = pmf.weights
    r = np.convolve(w, w[::-1])
    r = 0.5 * (r + r[::-1])  # exact symmetry
    np.maximum(r, 0.0, out=r)
    return make_pmf(-(len(w) - 1), r, normalize=True, meta={"family": "difference"})


def random_log_concave(
    m: int,
    symmetric: bool = False,
    rng: np.random.Generator | int | None = None,
    scale: float = 1.0,
) -> DiscretePmf:
    """Random log-concave pmf on an interval of length m.

    Log-weights are a concave sequence: a start slope uniform in [-2, 2]
    followed by i.i.d. second differences -Exp(scale).  With ``symmetric``
    the half sequence on {0..m//2} (start slope in [-2, 0]) is reflected,
    so the support is {-(m//2)..m//2}.  Points far below the mode whose
    weight would be subnormal are dropped, so very peaked draws can have a
    shorter support than requested.
    """
    if not (1 <= m <= MAX_GENERATED_SIZE) or int(m) != m:
        raise ValueError(f"size must be an integer in [1, {MAX_GENERATED_SIZE}], got {m!r}")
    rng = np.random.default_rng(rng)
    half = m // 2
    n = half + 1 if symmetric else int(m)
    slope = rng.uniform(-2.0, 0.0) if symmetric else rng.uniform(-2.0, 2.0)
    curv = rng.exponential(scale, size=max(n - 2, 0))
    steps = slope - np.concatenate([[0.0], np.cumsum(curv)])[: max(n - 1, 0)]
    ell = np.concatenate([[0.0], np.cumsum(steps)])
    if symmetric:
        ell = np.concatenate([ell[:0:-1], ell])
        offset = -half
    else:
        offset = int(rng.integers(-m, m + 1))
    keep = np.flatnonzero(ell >= ell.max() - _LOG_FLOOR)
    ell = ell[keep[0] : keep[-1] + 1]
    if symmetric:
        offset = -(len(ell) // 2)
    else:
        offset += int(keep[0])
    w = np.exp(ell - ell.max())
    w /= math.fsum(w.tolist())
    if symmetric:
        w = 0.5 * (w + w[::-1])
    meta = {"family": "random_log_concave", "m": int(m), "symmetric": bool(symmetric)}
    return make_pmf(offset, w, meta=meta)
