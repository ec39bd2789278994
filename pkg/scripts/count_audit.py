"""Audit counting formulas and size conditions against direct methods.

Sweeps small complete hosts checking the closed-form matching count
against explicit enumeration, then runs the closed-form size-condition
audit at a chosen grid point (default: the smallest point satisfying
the primary sampling threshold for k = 2, s = 1).

    python3 scripts/count_audit.py --max-binom 200 --audit-n 1600
"""

import argparse
from math import comb

from matchlab.bounds import matching_count
from matchlab.campaign import complete_audit
from matchlab.families import complete_family
from matchlab.oracle import enumerate_matchings


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-binom", type=int, default=200,
                    help="check every (n, k) with C(n, k) at most this")
    ap.add_argument("--count-cap", type=int, default=200_000,
                    help="skip cells with more matchings than this")
    ap.add_argument("--audit-n", type=int, default=1600)
    ap.add_argument("--audit-k", type=int, default=2)
    ap.add_argument("--audit-s", type=int, default=1)
    ap.add_argument("--audit-t", type=int, default=1)
    args = ap.parse_args()

    cells = bad = 0
    for n in range(1, args.max_binom + 1):
        for k in range(1, n + 1):
            if comb(n, k) > args.max_binom:
                continue
            host = complete_family(n, k)
            s = 0
            while True:
                expect = matching_count(n, k, s)
                if expect > args.count_cap:
                    break
                got = len(enumerate_matchings(host, s + 1))
                cells += 1
                if got != expect:
                    bad += 1
                    print(f"MISMATCH n={n} k={k} s={s}: "
                          f"enumerated {got}, formula {expect}")
                if (s + 1) * k > n:
                    break
                s += 1
    print(f"matching counts: {cells} cells checked, {bad} mismatches")

    rec = complete_audit(args.audit_n, args.audit_k, args.audit_s,
                         args.audit_t)
    print(f"size conditions at n={rec.n} k={rec.k} s={rec.s} t={rec.t}: "
          f"{'all hold' if rec.ok else 'VIOLATED'} "
          f"(classes checked: {rec.checked})")
    for wit in rec.violations:
        print(f"  {wit}")
    return 0 if bad == 0 and rec.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
