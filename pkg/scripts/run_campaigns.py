#!/usr/bin/env python3
"""Run all verification campaigns at full scale and write a summary CSV.

Usage:
    python3 scripts/run_campaigns.py [--out campaigns.csv] [--seed N]
                                     [--scale {smoke,full}]
"""

import argparse
import sys

from p3pshare.sceneio import write_csv
from p3pshare.scenes import THEOREM_IDS, verify_theorem

FULL = {
    "side_nsc": dict(trials=1500, converse_trials=2000),
    "point_nsc": dict(trials=1500, converse_trials=2000),
    "companion": dict(trials=10000),
    "danger_repeat": dict(trials=200),
    "construct_side": dict(trials=300),
    "construct_point": dict(trials=300),
}
SMOKE = {tid: dict(trials=12) for tid in THEOREM_IDS}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="campaigns.csv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", choices=("smoke", "full"), default="full")
    args = ap.parse_args(argv)

    plans = FULL if args.scale == "full" else SMOKE
    rows = []
    worst_failures = 0
    for tid in THEOREM_IDS:
        rep = verify_theorem(tid, seed=args.seed, **plans[tid])
        worst_failures += len(rep.failures)
        rows.append([tid, rep.trials, rep.passes, len(rep.failures),
                     rep.skipped, f"{rep.pass_rate:.4f}",
                     f"{rep.residual_max:.3e}", f"{rep.residual_median:.3e}",
                     f"{rep.wall_time:.2f}"])
        print(f"{tid}: passes={rep.passes} failures={len(rep.failures)} "
              f"skipped={rep.skipped} rate={rep.pass_rate:.4f} "
              f"({rep.wall_time:.1f} s)")
        for key, val in rep.details.items():
            print(f"    {key}: {val}")
        for trial, reason in rep.failures[:5]:
            print(f"    FAIL {trial}: {reason}")

    write_csv(args.out, ["theorem", "trials", "passes", "failures", "skipped",
                         "pass_rate", "residual_max", "residual_median",
                         "wall_time_s"], rows)
    print(f"\nwrote {args.out}")
    return 1 if worst_failures else 0


if __name__ == "__main__":
    sys.exit(main())
