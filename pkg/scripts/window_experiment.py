"""Probe the sampling window where nu <= s yet the family is non-trivial.

Phase one samples at the window's geometric-mean test point and counts
how often the draw lands (nu <= s and non-trivial).  Phase two samples
above the window's upper edge and reports the matching-count union
bound plus the observed nu <= s frequency, with no floor.

    python3 scripts/window_experiment.py --n 30 --k 10 --s 6 --trials 200
"""

import argparse

from matchlab.bounds import regime_report, window_diagnostics
from matchlab.campaign import CampaignConfig, run_campaign
from matchlab.families import matching_number
from matchlab.sampling import SampleSpec, sample_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--s", type=int, default=6)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--hot-trials", type=int, default=20)
    ap.add_argument("--hot-factor", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/window")
    args = ap.parse_args()

    rep = regime_report(args.n, args.k, args.s)
    if not rep.window_nonempty:
        print(f"window empty: p_low={rep.window_low:.3g} "
              f">= p_high={rep.window_high:.3g}")
        return 2
    print(f"window [{rep.window_low:.3e}, {rep.window_high:.3e}], "
          f"test point {rep.window_test_point:.3e}")

    cfg = CampaignConfig(
        kind="window",
        n=[args.n],
        k=[args.k],
        s=[args.s],
        trials=args.trials,
        seed=args.seed,
        out=args.out,
    )
    row = run_campaign(cfg)["cells"][0]
    print(f"phase 1: {row['successes']}/{row['trials']} trials with "
          f"nu <= {args.s} and non-trivial "
          f"(mean edges {row['mean_edges']:.0f})")

    p_hot = min(1.0, args.hot_factor * rep.window_high)
    diag = window_diagnostics(args.n, args.k, args.s, p_hot)
    hits = 0
    for trial in range(args.hot_trials):
        fam = sample_family(SampleSpec(
            n=args.n, k=args.k, p=p_hot,
            seed=args.seed + 1, trial_index=trial,
        ))
        hits += matching_number(fam)[0] <= args.s
    print(f"phase 2 at p={p_hot:.3e}: matching union bound "
          f"{diag.union_bound} ({diag.matching_count} possible "
          f"matchings), nu <= {args.s} in {hits}/{args.hot_trials} trials")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
