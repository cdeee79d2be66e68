"""Finitely supported probability mass functions on the integers.

A :class:`DiscretePmf` is an integer offset plus a weight vector; the support
is the contiguous interval ``[offset, offset + len(weights) - 1]`` and both end
weights are strictly positive.  Infinite-support families are materialized by
dropping a tail of mass at most ``tau`` on each side and renormalizing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterator, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import PmfError

NORMALIZATION_TOL = 1e-9
DEFAULT_TAU = 1e-12
MAX_TAU = 1e-6

# arrays for infinite families are built wide enough that the mass beyond
# them is below tau * _SLACK_FACTOR
_SLACK_FACTOR = 1e-6


@dataclass(frozen=True, eq=False)
class DiscretePmf:
    offset: int
    weights: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    @property
    def lo(self) -> int:
        return self.offset

    @property
    def hi(self) -> int:
        return self.offset + len(self.weights) - 1

    @property
    def size(self) -> int:
        return len(self.weights)

    @cached_property
    def points(self) -> np.ndarray:
        """Integer support points, ``lo..hi``."""
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    @property
    def has_interior_zero(self) -> bool:
        return bool(np.any(self.weights == 0.0))

    def prob(self, k: int) -> float:
        i = int(k) - self.offset
        if 0 <= i < len(self.weights):
            return float(self.weights[i])
        return 0.0

    __call__ = prob

    def items(self) -> Iterator[tuple[int, float]]:
        """Yield ``(k, p(k))`` over the support interval, zeros included."""
        for i, w in enumerate(self.weights.tolist()):
            yield self.offset + i, w

    @cached_property
    def moments(self) -> "MomentProfile":
        return moments(self)

    @cached_property
    def digest(self) -> str:
        return fingerprint(self)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"offset": int(self.offset), "probs": [float(w) for w in self.weights]}
        if self.meta:
            doc["meta"] = _jsonable(dict(self.meta))
        return doc

    def __repr__(self) -> str:
        name = self.meta.get("family", "pmf")
        return f"DiscretePmf({name}, support=[{self.lo}, {self.hi}])"


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def make_pmf(offset: int, weights: Sequence[float], normalize: bool = False, meta: Mapping | None = None) -> DiscretePmf:
    """Validate, trim and (optionally) rescale a weight vector into a pmf."""
    if isinstance(offset, bool) or int(offset) != offset:
        raise PmfError(f"offset must be an integer, got {offset!r}")
    w = np.array(weights, dtype=np.float64).ravel()
    if w.size == 0:
        raise PmfError("weights must be non-empty")
    if not np.all(np.isfinite(w)):
        raise PmfError("weights must be finite")
    if np.any(w < 0):
        raise PmfError(f"negative weight at index {int(np.argmax(w < 0))}")
    nz = np.flatnonzero(w)
    if nz.size == 0:
        raise PmfError("all weights are zero")
    total = math.fsum(w.tolist())
    if normalize:
        w = w / total
    elif abs(total - 1.0) > NORMALIZATION_TOL:
        raise PmfError(f"weights sum to {total!r}; pass normalize=True to rescale")
    w = w[nz[0] : nz[-1] + 1].copy()
    w.setflags(write=False)
    info = dict(meta or {})
    info.setdefault("input_sum", total)
    return DiscretePmf(int(offset) + int(nz[0]), w, MappingProxyType(info))


def _truncated(offset: int, weights: np.ndarray, tau: float, meta: dict) -> DiscretePmf:
    """Drop the largest tails of mass <= tau on each side, then renormalize.

    ``weights`` must already carry essentially all of the distribution's
    mass; the mass outside it is assumed negligible against tau.
    """
    _check_tau(tau)
    w = np.asarray(weights, dtype=np.float64)
    left = np.cumsum(w)
    right = np.cumsum(w[::-1])
    # lo = number of leading entries whose total mass fits the budget
    lo = int(np.searchsorted(left, tau, side="right"))
    cut_r = int(np.searchsorted(right, tau, side="right"))
    hi = len(w) - cut_r
    if lo >= hi:  # budget would swallow the mode; keep the heaviest point
        lo = int(np.argmax(w))
        hi = lo + 1
    left_mass = float(left[lo - 1]) if lo > 0 else 0.0
    right_mass = float(right[cut_r - 1]) if cut_r > 0 else 0.0
    info = dict(meta)
    info.update(tau=tau, excluded_left=left_mass, excluded_right=right_mass)
    return make_pmf(offset + lo, w[lo:hi], normalize=True, meta=info)


def _check_tau(tau: float) -> None:
    if not (0.0 < tau <= MAX_TAU):
        raise PmfError(f"truncation budget tau must lie in (0, {MAX_TAU}], got {tau!r}")


def _check_prob(name: str, p: float) -> None:
    if not (0.0 < p < 1.0):
        raise PmfError(f"{name} must lie in (0, 1), got {p!r}")


# ---------------------------------------------------------------------------
# families


def dirac(k: int) -> DiscretePmf:
    return make_pmf(k, [1.0], meta={"family": "dirac", "k": int(k)})


def bernoulli(p: float) -> DiscretePmf:
    _check_prob("p", p)
    return make_pmf(0, [1.0 - p, p], meta={"family": "bernoulli", "p": p})


def binomial(n: int, p: float, tau: float | None = None) -> DiscretePmf:
    """Binomial(n, p); with ``tau`` set, the negligible tails are cut like an infinite family."""
    if n < 1 or int(n) != n:
        raise PmfError(f"n must be a positive integer, got {n!r}")
    _check_prob("p", p)
    meta = {"family": "binomial", "n": int(n), "p": p}
    k = np.arange(int(n) + 1)
    w = np.exp(stats.binom.logpmf(k, int(n), p))
    if tau is None:
        return make_pmf(0, w, normalize=True, meta=meta)
    return _truncated(0, w, tau, meta)


def geometric(r: float, tau: float = DEFAULT_TAU) -> DiscretePmf:
    """p(k) = (1 - r) r^k on k >= 0 (mean r / (1 - r))."""
    _check_prob("r", r)
    _check_tau(tau)
    length = int(math.ceil(math.log(tau * _SLACK_FACTOR) / math.log(r))) + 2
    k = np.arange(length)
    w = (1.0 - r) * np.exp(k * math.log(r))
    return _truncated(0, w, tau, {"family": "geometric", "r": r})


def poisson(lam: float, tau: float = DEFAULT_TAU) -> DiscretePmf:
    if not lam > 0:
        raise PmfError(f"lambda must be positive, got {lam!r}")
    _check_tau(tau)
    target = math.log(tau * _SLACK_FACTOR) - 10.0
    mode = int(math.floor(lam))
    step = int(math.ceil(math.sqrt(lam))) + 4
    hi = mode
    while stats.poisson.logpmf(hi, lam) > target:
        hi += step
    lo = mode
    while lo > 0 and stats.poisson.logpmf(lo, lam) > target:
        lo = max(0, lo - step)
    k = np.arange(lo, hi + 1)
    w = np.exp(stats.poisson.logpmf(k, lam))
    return _truncated(lo, w, tau, {"family": "poisson", "lam": lam})


def _symmetric(log_half, tau: float, meta: dict) -> DiscretePmf:
    """Build a symmetric pmf from log-weights on k = 0..K (unnormalized)."""
    log_half = np.asarray(log_half, dtype=np.float64)
    full = np.concatenate([log_half[:0:-1], log_half])
    w = np.exp(full - full.max())
    w /= math.fsum(w.tolist())
    return _truncated(-(len(log_half) - 1), w, tau, meta)


def _symmetric_trunc_len(log_tail_at, start: int = 1) -> int:
    """Smallest K with weight ratio below tau*slack, found by doubling."""
    k = max(start, 1)
    while log_tail_at(k) > 0:
        k *= 2
    return k


def symmetric_poisson_lambda(tol: float = 1e-12) -> float:
    """Solve 2e^l/(2e^l - 1) * l(1 + l) = 1 for l by bisection on [1/4, 1]."""

    def excess(lam):
        e = math.exp(lam)
        return 2 * e / (2 * e - 1) * lam * (1 + lam) - 1.0

    lo, hi = 0.25, 1.0
    if not (excess(lo) < 0 < excess(hi)):
        raise ArithmeticError("normalization identity is not bracketed by [1/4, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    assert 0.25 <= lam <= 1.0
    return lam


def symmetric_poisson_unit_variance(tau: float = DEFAULT_TAU) -> DiscretePmf:
    """q(k) proportional to lam^|k| / |k|!, with lam chosen so the variance is 1."""
    _check_tau(tau)
    lam = symmetric_poisson_lambda()
    target = math.log(tau * _SLACK_FACTOR)
    K = _symmetric_trunc_len(lambda k: k * math.log(lam) - math.lgamma(k + 1) - target, 8)
    k = np.arange(K + 1)
    logw = k * math.log(lam) - np.array([math.lgamma(i + 1) for i in k])
    return _symmetric(logw, tau, {"family": "symmetric_poisson", "lam": lam})


def symmetric_geometric_unit_variance(tau: float = DEFAULT_TAU) -> DiscretePmf:
    """q(k) proportional to r^|k|; variance 2r/(1-r)^2 = 1 gives r = 2 - sqrt(3)."""
    _check_tau(tau)
    r = 2.0 - math.sqrt(3.0)
    K = int(math.ceil(math.log(tau * _SLACK_FACTOR) / math.log(r))) + 2
    logw = np.arange(K + 1) * math.log(r)
    return _symmetric(logw, tau, {"family": "symmetric_geometric", "r": r})


def discretized_gaussian(lam: float, tau: float = DEFAULT_TAU) -> DiscretePmf:
    """q(k) proportional to exp(-lam k^2)."""
    if not lam > 0:
        raise PmfError(f"lambda must be positive, got {lam!r}")
    _check_tau(tau)
    K = int(math.ceil(math.sqrt(-math.log(tau * _SLACK_FACTOR) / lam))) + 2
    k = np.arange(K + 1, dtype=np.float64)
    return _symmetric(-lam * k * k, tau, {"family": "discretized_gaussian", "lam": lam})


def discrete_uniform(m: int) -> DiscretePmf:
    """Uniform on {-m, ..., m}."""
    if m < 0 or int(m) != m:
        raise PmfError(f"m must be a nonnegative integer, got {m!r}")
    n = 2 * int(m) + 1
    return make_pmf(-int(m), np.full(n, 1.0 / n), meta={"family": "discrete_uniform", "m": int(m)})


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class MomentProfile:
    mean: float
    variance: float
    mean_abs_dev: float
    entropy: float
    max_pmf: float
    pmf: DiscretePmf = field(repr=False)

    def abs_moment(self, beta: float) -> float:
        """E|X - EX|^beta."""
        if beta < 1:
            raise ValueError(f"beta must be >= 1, got {beta!r}")
        d = np.abs(self.pmf.points - self.mean)
        return math.fsum((self.pmf.weights * d**beta).tolist())


def moments(pmf: DiscretePmf) -> MomentProfile:
    w = pmf.weights
    k = pmf.points.astype(np.float64)
    mean = math.fsum((w * k).tolist())
    d = k - mean
    variance = math.fsum((w * d * d).tolist())
    mad = math.fsum((w * np.abs(d)).tolist())
    pos = w[w > 0]
    entropy = -math.fsum((pos * np.log(pos)).tolist())
    return MomentProfile(mean, variance, mad, max(entropy, 0.0), float(w.max()), pmf)


def is_centered(pmf: DiscretePmf, tol: float = 1e-12) -> bool:
    return abs(pmf.moments.mean) <= tol


def levels(pmf: DiscretePmf) -> np.ndarray:
    """Compensated running sums of the weights, clipped to be monotone with last value 1."""
    out = np.empty(len(pmf.weights))
    s = 0.0
    c = 0.0
    for i, x in enumerate(pmf.weights.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i] = s + c
    np.minimum(out, 1.0, out=out)
    np.maximum.accumulate(out, out=out)
    out[-1] = 1.0
    return out


def cdf(pmf: DiscretePmf, k: int) -> float:
    if k < pmf.lo:
        return 0.0
    if k >= pmf.hi:
        return 1.0
    return float(levels(pmf)[int(k) - pmf.lo])


def quantile(pmf: DiscretePmf, u: float) -> int:
    """min{k in support : cdf(k) >= u} for u in (0, 1)."""
    if not (0.0 < u < 1.0):
        raise ValueError(f"u must lie in (0, 1), got {u!r}")
    i = int(np.searchsorted(levels(pmf), u, side="left"))
    return pmf.lo + min(i, pmf.size - 1)


# ---------------------------------------------------------------------------
# JSON documents


def dumps(pmf: DiscretePmf) -> str:
    # json writes floats with repr: shortest round-trip form, at most 17 digits
    return json.dumps(pmf.to_dict(), sort_keys=True)


def loads(text: str) -> DiscretePmf:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PmfError(f"not a JSON document: {exc}") from exc
    return from_dict(doc)


def from_dict(doc: Mapping[str, Any]) -> DiscretePmf:
    if not isinstance(doc, Mapping) or "offset" not in doc or "probs" not in doc:
        raise PmfError("pmf document needs 'offset' and 'probs'")
    offset, probs = doc["offset"], doc["probs"]
    if not isinstance(offset, int) or isinstance(offset, bool):
        raise PmfError("'offset' must be an integer")
    if not isinstance(probs, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in probs):
        raise PmfError("'probs' must be a list of numbers")
    meta = doc.get("meta") or {}
    if not isinstance(meta, Mapping):
        raise PmfError("'meta' must be an object")
    return make_pmf(offset, probs, meta=meta)


def load(path) -> DiscretePmf:
    with open(path) as fh:
        return loads(fh.read())


def save(pmf: DiscretePmf, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(pmf) + "\n")


def fingerprint(pmf: DiscretePmf) -> str:
    """Short content hash of offset and weights (meta excluded)."""
    body = json.dumps({"offset": int(pmf.offset), "probs": [float(w) for w in pmf.weights]})
    return hashlib.sha256(body.encode()).hexdigest()[:16]
