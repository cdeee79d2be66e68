"""Run every verification suite for a few master seeds and print per-statement minimum slack.

    python scripts/run_verify.py --seeds 0 1 2 --trials 200 --workers 4
"""

import argparse
import sys
from collections import defaultdict

from lcdist.campaign import CampaignConfig, run_campaign


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-size", type=int, default=40)
    args = ap.parse_args()

    worst: dict[str, float] = defaultdict(lambda: float("inf"))
    counts: dict[str, int] = defaultdict(int)
    failures = 0
    for seed in args.seeds:
        rep = run_campaign(CampaignConfig(trials=args.trials, seed=seed, max_size=args.max_size, workers=args.workers))
        failures += len(rep.failing())
        for name, s in rep.body["summary"].items():
            counts[name] += s["count"]
            worst[name] = min(worst[name], s.get("min_slack", -s.get("max_gap", 0.0)))
        print(f"seed {seed}: {'pass' if rep.passed else 'FAIL'} in {rep.wall_time:.1f} s", file=sys.stderr)

    print(f"{'statement':<32} {'checks':>8} {'min slack / -max gap':>22}")
    for name in sorted(counts):
        print(f"{name:<32} {counts[name]:>8} {worst[name]:>22.6g}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
