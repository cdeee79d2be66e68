"""Command line entry point: ``lcdist {dist,gen,verify,experiment}``.

Exit codes: 0 success / all checks pass, 1 at least one inequality or
oracle failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import pmf as pmfmod
from .campaign import SUITES, CampaignConfig, run_campaign
from .distances import bounded_lipschitz, chi2, kl, levy_prokhorov, tv_sum, wasserstein
from .errors import PmfError, SupportViolation
from .experiment import binomial_poisson, write_csv
from .logconcave import random_log_concave


class UsageError(Exception):
    pass


def _metric(name: str, mu, nu):
    if name == "tv":
        return tv_sum(mu, nu)
    if name == "lp":
        return levy_prokhorov(mu, nu)
    if name == "bl":
        return bounded_lipschitz(mu, nu)[0]
    if name == "kl":
        return kl(mu, nu)
    if name == "chi2":
        return chi2(mu, nu)
    if name.startswith("w:"):
        try:
            p = float(name[2:])
        except ValueError:
            raise UsageError(f"bad Wasserstein order in {name!r}") from None
        if not p >= 1:
            raise UsageError(f"Wasserstein order must be >= 1 in {name!r}")
        return wasserstein(p, mu, nu)
    raise UsageError(f"unknown metric {name!r} (choose from tv, lp, bl, w:<p>, kl, chi2)")


def cmd_dist(args) -> int:
    try:
        mu, nu = pmfmod.load(args.mu), pmfmod.load(args.nu)
    except (OSError, PmfError) as exc:
        raise UsageError(str(exc)) from exc
    names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    rows = []
    for name in names:
        try:
            rows.append({"metric": name, "value": _metric(name, mu, nu)})
        except SupportViolation as exc:
            rows.append({"metric": name, "value": None, "error": "support-violation", "points": list(exc.points)})
    width = max(len(r["metric"]) for r in rows)
    for r in rows:
        shown = repr(r["value"]) if r["value"] is not None else f"support-violation at k={list(r['points'])}"
        print(f"{r['metric']:<{width}}  {shown}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"mu": args.mu, "nu": args.nu, "rows": rows}, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return 0


_FAMILIES = {
    "dirac": (pmfmod.dirac, {"k": int}),
    "bernoulli": (pmfmod.bernoulli, {"p": float}),
    "binomial": (pmfmod.binomial, {"n": int, "p": float, "tau": float}),
    "geometric": (pmfmod.geometric, {"r": float, "tau": float}),
    "poisson": (pmfmod.poisson, {"lam": float, "tau": float}),
    "symmetric-poisson": (pmfmod.symmetric_poisson_unit_variance, {"tau": float}),
    "symmetric-geometric": (pmfmod.symmetric_geometric_unit_variance, {"tau": float}),
    "discretized-gaussian": (pmfmod.discretized_gaussian, {"lam": float, "tau": float}),
    "uniform": (pmfmod.discrete_uniform, {"m": int}),
}


def cmd_gen(args) -> int:
    kwargs = {}
    for item in args.params:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"parameters are key=value, got {item!r}")
        kwargs[key] = val
    try:
        if args.family == "random":
            m = int(kwargs.pop("m", 9))
            sym = kwargs.pop("symmetric", "false").lower() in ("1", "true", "yes")
            if kwargs:
                raise UsageError(f"unknown parameters {sorted(kwargs)}")
            p = random_log_concave(m, sym, np.random.default_rng(args.seed))
        else:
            fn, spec = _FAMILIES[args.family]
            unknown = set(kwargs) - set(spec)
            if unknown:
                raise UsageError(f"unknown parameters {sorted(unknown)} for {args.family}")
            p = fn(**{k: spec[k](v) for k, v in kwargs.items()})
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    text = pmfmod.dumps(p)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify(args) -> int:
    try:
        cfg = CampaignConfig(
            suite=args.suite,
            trials=args.trials,
            seed=args.seed,
            min_size=args.min_size,
            max_size=args.max_size,
            tol=args.tol,
            out=args.out,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = run_campaign(cfg)
    if args.out:
        rep.write(args.out)
    for name, s in rep.body["summary"].items():
        extra = f"min_slack={s['min_slack']:.3g}" if "min_slack" in s else f"max_gap={s.get('max_gap', 0.0):.3g}"
        status = "ok  " if s["failures"] == 0 else "FAIL"
        print(f"{status} {name:<32} n={s['count']:<6} fail={s['failures']:<4} {extra}")
    if not rep.passed:
        for r in rep.failing()[:20]:
            print("failed:", json.dumps(r, sort_keys=True), file=sys.stderr)
        return 1
    return 0


def cmd_experiment(args) -> int:
    try:
        ns = [int(x) for x in args.n.split(",") if x.strip()]
        rows = binomial_poisson(args.lam, ns, args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        with open(args.out, "w") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lcdist", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="distances between two pmf JSON files")
    d.add_argument("mu")
    d.add_argument("nu")
    d.add_argument("--metrics", default="tv,lp,bl,w:1,w:2,kl,chi2")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dist)

    g = sub.add_parser("gen", help="write a pmf JSON document")
    g.add_argument("family", choices=sorted(_FAMILIES) + ["random"])
    g.add_argument("params", nargs="*", help="key=value family parameters")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="run a randomized verification campaign")
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--min-size", type=int, default=1)
    v.add_argument("--max-size", type=int, default=40)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="convergence sweep, CSV output")
    e.add_argument("name", choices=("binomial-poisson",))
    e.add_argument("--lam", type=float, default=1.0)
    e.add_argument("--n", default="2,4,8,16,32")
    e.add_argument("--tau", type=float, default=pmfmod.DEFAULT_TAU)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lcdist: error: {exc}", file=sys.stderr)
        return 2
