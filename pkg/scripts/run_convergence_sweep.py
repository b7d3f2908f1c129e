#!/usr/bin/env python3
"""Convergence study: how many iterations until the error curve plateaus.

Runs one image at one resolution and level count for a batch of seeds,
prints the per-run plateau iteration and level, and writes the full
results document (plus optional plot CSVs).

    python3 scripts/run_convergence_sweep.py --image gradient --resolution 128 \
        --levels 256 --runs 10 --horizon 50 --zero-outside --out convergence.json
"""

from __future__ import annotations

import argparse
import sys

from holobench.harness import ExperimentPlan, emit_plot_data, export_results, run_plan
from holobench.metrics import detect_convergence


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--image", default="gradient", help="synthetic id or raster path")
    ap.add_argument("--resolution", type=int, default=128)
    ap.add_argument("--levels", type=int, default=256)
    ap.add_argument("--kind", choices=["phase", "amplitude"], default="phase")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=50)
    ap.add_argument("--seed-base", type=int, default=0)
    ap.add_argument("--zero-outside", action="store_true",
                    help="constrain the replay field to dark outside the target")
    ap.add_argument("--out", default="convergence_results.json")
    ap.add_argument("--plot-dir", default=None)
    args = ap.parse_args(argv)

    plan = ExperimentPlan(
        images=[args.image],
        resolutions=[args.resolution],
        level_counts=[args.levels],
        kind=args.kind,
        runs_per_cell=args.runs,
        iteration_horizon=args.horizon,
        seed_base=args.seed_base,
        zero_outside_target=args.zero_outside,
    )
    results = run_plan(plan, progress=lambda line: print(line, file=sys.stderr))
    cell = results.cells[0]
    if cell.error is not None:
        print(f"cell failed: {cell.error}", file=sys.stderr)
        return 1

    ratio = results.normalization["ratios"][cell.image]
    print(f"{args.image}@{args.resolution}, {args.levels} levels, "
          f"{args.runs} runs x {args.horizon} iterations")
    for seed, curve in zip(cell.seeds, cell.per_run_mse):
        found = detect_convergence([v * ratio for v in curve])
        if found is None:
            print(f"  seed {seed}: no plateau within the horizon")
        else:
            print(f"  seed {seed}: plateau at iteration {found.n} "
                  f"(NMSE {found.value:.6g})")
    if cell.convergence:
        print(f"mean curve: plateau at iteration {cell.convergence['n']} "
              f"(NMSE {cell.convergence['value']:.6g})")

    export_results(results, args.out)
    print(f"results -> {args.out}")
    if args.plot_dir:
        for path in emit_plot_data(results, args.plot_dir):
            print(f"plot table -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
