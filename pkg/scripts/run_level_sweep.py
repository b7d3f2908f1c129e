#!/usr/bin/env python3
"""Level sweep: plateau error as a function of modulation level count.

Sweeps the level counts for one image, prints the plateau NMSE per level
with the log2-space straight-line fit, and writes the results document
(plus optional plot CSVs; `convergent_error_vs_levels.csv` carries the
log2 columns ready to plot).

    python3 scripts/run_level_sweep.py --image gradient --resolution 128 \
        --levels 2,4,8,16,32,64 --runs 10 --horizon 50 --zero-outside \
        --out level_sweep.json
"""

from __future__ import annotations

import argparse
import sys

from holobench.harness import ExperimentPlan, emit_plot_data, export_results, run_plan


def _levels(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        out.append(None if part == "continuous" else int(part))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--image", default="gradient")
    ap.add_argument("--resolution", type=int, default=128)
    ap.add_argument("--levels", type=_levels, default="2,4,8,16,32,64",
                    help="comma list; 'continuous' is allowed")
    ap.add_argument("--kind", choices=["phase", "amplitude"], default="phase")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=50)
    ap.add_argument("--zero-outside", action="store_true")
    ap.add_argument("--out", default="level_sweep_results.json")
    ap.add_argument("--plot-dir", default=None)
    args = ap.parse_args(argv)
    levels = args.levels if isinstance(args.levels, list) else _levels(args.levels)

    plan = ExperimentPlan(
        images=[args.image],
        resolutions=[args.resolution],
        level_counts=levels,
        kind=args.kind,
        runs_per_cell=args.runs,
        iteration_horizon=args.horizon,
        zero_outside_target=args.zero_outside,
    )
    results = run_plan(plan, progress=lambda line: print(line, file=sys.stderr))
    for cell in results.cells:
        if cell.error is not None:
            print(f"cell failed ({cell.levels} levels): {cell.error}", file=sys.stderr)
            continue
        label = "continuous" if cell.levels is None else f"{cell.levels:>10}"
        value = cell.convergence["value"] if cell.convergence else cell.mean_nmse[-1]
        print(f"  levels {label}: plateau NMSE {value:.6g}")
    for fit in results.analysis["level_fits"]:
        print(f"log2 fit: slope {fit['slope']:.3f}, intercept {fit['intercept']:.3f}, "
              f"R^2 {fit['r_squared']:.4f}")

    export_results(results, args.out)
    print(f"results -> {args.out}")
    if args.plot_dir:
        for path in emit_plot_data(results, args.plot_dir):
            print(f"plot table -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
