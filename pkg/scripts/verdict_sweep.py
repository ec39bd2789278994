"""Sweep extremal verdicts over a sampling grid.

For each (n, p) cell, samples `trials` families and reports how often
the best subfamily with nu <= s is no better than the best trivial one.

    python3 scripts/verdict_sweep.py --n 20 30 --k 2 --s 1 \
        --p 0.5 0.8 --trials 100 --seed 7 --out runs/verdict
"""

import argparse

from matchlab.campaign import CampaignConfig, run_campaign


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", required=True)
    ap.add_argument("--k", type=int, nargs="+", default=[2])
    ap.add_argument("--s", type=int, nargs="+", default=[1])
    ap.add_argument("--p", type=float, nargs="+", default=None,
                    help="omit to use the primary threshold per cell")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--floor", type=float, default=0.95)
    ap.add_argument("--out", default="runs/verdict")
    args = ap.parse_args()

    cfg = CampaignConfig(
        kind="verdict",
        n=args.n,
        k=args.k,
        s=args.s,
        p=args.p if args.p else "auto",
        trials=args.trials,
        seed=args.seed,
        floor=args.floor,
        out=args.out,
    )
    summary = run_campaign(cfg)
    for row in summary["cells"]:
        print(
            f"n={row['n']} k={row['k']} s={row['s']} p={row['p']:.3g}: "
            f"{row['successes']}/{row['trials']} hold "
            f"(mean optimum {row['mean_value']:.1f}, "
            f"mean edges {row['mean_edges']:.0f})"
        )
    print(f"wrote {summary['jsonl']} and {summary['csv']}")
    return 0 if summary["ok"] else 3


if __name__ == "__main__":
    raise SystemExit(main())
