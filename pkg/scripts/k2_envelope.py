"""Check the two-point concentration of the largest nu <= s subgraph.

Samples graphs at edge probability p and tests whether the exact
maximum subgraph size X lands in (1 +- eps) * p * f(n, s), where
f(n, s) is the closed-form edge maximum over graphs with nu <= s.

    python3 scripts/k2_envelope.py --n 200 --s 2 --p 0.6 \
        --epsilon 0.3 --trials 50
"""

import argparse

from matchlab.graphs import f_bound, max_nu_subgraph
from matchlab.sampling import SampleSpec, sample_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--p", type=float, default=0.6)
    ap.add_argument("--epsilon", type=float, default=0.3)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    center = args.p * f_bound(args.n, args.s)
    lo, hi = (1 - args.epsilon) * center, (1 + args.epsilon) * center
    print(f"envelope [{lo:.1f}, {hi:.1f}] around p*f = {center:.1f}")
    print("trial,edges,x,ratio,ok")
    violations = 0
    for trial in range(args.trials):
        fam = sample_family(SampleSpec(
            n=args.n, k=2, p=args.p, seed=args.seed, trial_index=trial,
        ))
        x_size = max_nu_subgraph(fam, args.s).size
        ok = lo <= x_size <= hi
        violations += not ok
        print(f"{trial},{len(fam)},{x_size},{x_size / center:.4f},{ok}")
    print(f"# {violations} violations in {args.trials} trials")
    return 0 if violations == 0 else 3


if __name__ == "__main__":
    raise SystemExit(main())
