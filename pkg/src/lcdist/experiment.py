"""Law-of-small-numbers sweep: binomial(n, lam/n) against Poisson(lam)."""

from __future__ import annotations

import csv
import math
from typing import Iterable, TextIO

from .distances import bounded_lipschitz, chi2, kl, levy_prokhorov, tv_sum, wasserstein
from .pmf import DEFAULT_TAU, binomial, poisson

COLUMNS = ("name", "n", "tv", "lp", "bl", "w1", "w2", "kl", "chi2")
METRICS = COLUMNS[2:]


def binomial_poisson(lam: float, ns: Iterable[int], tau: float = DEFAULT_TAU) -> list[dict]:
    """One row of distances per n.  Both laws are cut at the same tail budget tau,
    which keeps the binomial support inside the Poisson one."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    ns = list(ns)
    for n in ns:
        if int(n) != n or n <= lam:
            raise ValueError(f"each n must be an integer > lambda, got {n!r}")
    ref = poisson(lam, tau)
    rows = []
    for n in ns:
        b = binomial(int(n), lam / n, tau)
        rows.append(
            {
                "name": "binomial-poisson",
                "n": int(n),
                "tv": tv_sum(b, ref),
                "lp": levy_prokhorov(b, ref),
                "bl": bounded_lipschitz(b, ref)[0],
                "w1": wasserstein(1, b, ref),
                "w2": wasserstein(2, b, ref),
                "kl": kl(b, ref, on_violation="inf"),
                "chi2": chi2(b, ref, on_violation="inf"),
            }
        )
    return rows


def trends(rows: list[dict]) -> dict[str, str]:
    out = {}
    for m in METRICS:
        vals = [r[m] for r in rows]
        pairs = list(zip(vals, vals[1:]))
        if all(b < a for a, b in pairs):
            out[m] = "strictly-decreasing"
        elif all(b <= a for a, b in pairs):
            out[m] = "nonincreasing"
        else:
            out[m] = "not-monotone"
    return out


def write_csv(rows: list[dict], fh: TextIO) -> None:
    w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) and math.isfinite(v) else v) for k, v in r.items()})
    for m, t in trends(rows).items():
        fh.write(f"# trend {m}: {t}\n")
