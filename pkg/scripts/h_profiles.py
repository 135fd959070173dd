"""Write the two reference h-profiles and summarize their shape.

    python scripts/h_profiles.py --outdir results/h_profiles [--grid 1000]

One ``x h(x)`` table per parameter set, plus the roots of h and the
values at the epsilon-insets on stdout.
"""

import argparse
from pathlib import Path

from pottstree.model import ModelParams
from pottstree.periodic import emit_h_profile, solve_periodic_class, theta_bar_cr
from pottstree.report import write_profile

PANELS = {
    "left": dict(q=3, k=3, m=1, theta=0.2),
    "right": dict(q=4, k=5, m=2, theta=0.2),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--outdir", type=Path, default=Path("results/h_profiles"))
    ap.add_argument("--grid", type=int, default=1000)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for panel, cfg in PANELS.items():
        params = ModelParams(cfg["q"], cfg["k"], cfg["theta"])
        prof = emit_h_profile(params, cfg["m"], args.grid)
        path = args.outdir / f"h_{panel}.dat"
        header = {**cfg, "grid": args.grid, "epsilon": prof.epsilon, "theta_bar_cr": theta_bar_cr(cfg["q"], cfg["k"])}
        write_profile(path, header, prof.x, prof.h)
        roots = [s.x for s in solve_periodic_class(params, cfg["m"])]
        print(f"{panel}: {cfg}  window=({prof.window[0]:.6g}, {prof.window[1]:.6g})")
        print(f"  roots of h: {', '.join(f'{r:.9g}' for r in roots)}")
        print(f"  sign changes: {prof.sign_changes()}  h(left inset)={prof.h[0]:.4f}  h(right inset)={prof.h[-1]:.4f}")
        print(f"  -> {path}")


if __name__ == "__main__":
    main()
