"""Period-two measure counts over admissible (q, k) at a fixed theta fraction.

    python scripts/count_table.py --qmax 6 --kmax 7 --fraction 0.8

theta is ``fraction * theta_bar_cr(q, k)``; rows compare the class-weighted
total with 2(2^q - 1) and list the number of distinct normalized fields.
"""

import argparse

from pottstree.model import ModelParams
from pottstree.periodic import count_periodic_measures, formal_class_threshold, theta_bar_cr


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--qmax", type=int, default=6)
    ap.add_argument("--kmax", type=int, default=7)
    ap.add_argument("--fraction", type=float, default=0.8)
    args = ap.parse_args()

    print(f"{'q':>3} {'k':>3} {'theta':>10} {'total':>6} {'2(2^q-1)':>9} {'distinct':>9} {'max res':>9}  note")
    for q in range(3, args.qmax + 1):
        for k in range(q, args.kmax + 1):
            theta = args.fraction * theta_bar_cr(q, k)
            cnt = count_periodic_measures(ModelParams(q, k, theta))
            star = formal_class_threshold(q, k)
            note = "below formal-class pole crossing" if star is not None and theta <= star else ""
            print(f"{q:>3} {k:>3} {theta:>10.5f} {cnt.total:>6} {cnt.predicted:>9} "
                  f"{len(cnt.distinct_fields):>9} {cnt.distinct_max_residual:>9.1e}  {note}")


if __name__ == "__main__":
    main()
