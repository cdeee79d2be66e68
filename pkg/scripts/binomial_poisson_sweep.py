"""Law-of-small-numbers sweep over several lambdas, one CSV per lambda.

    python scripts/binomial_poisson_sweep.py --lams 0.5 1 4 --max-exp 16 --outdir results/
"""

import argparse
import math
import sys
from pathlib import Path

from lcdist.experiment import binomial_poisson, trends, write_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lams", type=float, nargs="+", default=[0.5, 1.0, 4.0])
    ap.add_argument("--max-exp", type=int, default=14, help="largest n is 2**max_exp")
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for lam in args.lams:
        ns = [2**e for e in range(1, args.max_exp + 1) if 2**e > lam]
        rows = binomial_poisson(lam, ns)
        path = args.outdir / f"binomial_poisson_lam{lam:g}.csv"
        with open(path, "w") as fh:
            write_csv(rows, fh)
        # tv should decay like lam^2 / n for this pair
        slope = math.log(rows[-1]["tv"] / rows[-2]["tv"]) / math.log(rows[-1]["n"] / rows[-2]["n"])
        t = trends(rows)
        print(f"lambda={lam:g}: {len(rows)} rows -> {path}; tv log-log slope {slope:.3f}; trends {sorted(set(t.values()))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
