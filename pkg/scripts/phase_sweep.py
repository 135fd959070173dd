"""Solution counts across theta for one (q, k), with located transitions.

    python scripts/phase_sweep.py --q 3 --k 3 --theta-min 0.05 --theta-max 4 --steps 400 \
        --out results/sweep_q3k3.csv

Prints every count change together with the closed-form thresholds it should
sit next to.
"""

import argparse
from pathlib import Path

from pottstree.cli import main as cli_main
from pottstree.periodic import formal_class_threshold, theta_bar_cr
from pottstree.ti import critical_theta


def thresholds(q, k):
    out = {"theta_bar_cr": theta_bar_cr(q, k), "stability (k+q-1)/(k-1)": (k + q - 1) / (k - 1)}
    star = formal_class_threshold(q, k)
    if star is not None:
        out["formal class pole crossing"] = star
    if k == 3:
        for m in range(1, q):
            out[f"theta_cr(m={m})"] = critical_theta(q, m).theta_cr
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--theta-min", type=float, default=0.05)
    ap.add_argument("--theta-max", type=float, default=4.0)
    ap.add_argument("--steps", type=int, default=400)
    ap.add_argument("--out", type=Path, default=Path("results/sweep.csv"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    import contextlib
    import io
    import json

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["sweep", "--q", str(args.q), "--k", str(args.k), "--theta-min", str(args.theta_min),
                         "--theta-max", str(args.theta_max), "--steps", str(args.steps),
                         "--out", str(args.out), "--no-strict"])
    doc = json.loads(buf.getvalue())
    print(f"table -> {args.out} (exit {code})")
    for key in ("ti_transitions", "periodic_transitions"):
        print(key)
        for t in doc["results"][key]:
            print(f"  [{t['theta_left']:.5f}, {t['theta_right']:.5f}]  {t['from']} -> {t['to']}")
    print("closed-form thresholds")
    for name, value in thresholds(args.q, args.k).items():
        print(f"  {name:28s} {value:.10g}")
    for w in doc["warnings"]:
        print("warning:", w)


if __name__ == "__main__":
    main()
