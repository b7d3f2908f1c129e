#!/usr/bin/env python3
"""Resolution sweep: plateau error and iteration cost across target sizes.

Runs one image at several resolutions, prints plateau NMSE, convergence
iteration and mean per-iteration wall time for each, and writes the
results document (plus optional plot CSVs).

    python3 scripts/run_resolution_sweep.py --image gradient \
        --resolutions 64,128,256 --levels 256 --runs 5 --horizon 50 \
        --zero-outside --out resolution_sweep.json
"""

from __future__ import annotations

import argparse
import sys

from holobench.harness import ExperimentPlan, emit_plot_data, export_results, run_plan


def _ints(text: str) -> list:
    return [int(p) for p in text.split(",") if p.strip()]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--image", default="gradient")
    ap.add_argument("--resolutions", type=_ints, default="64,128,256",
                    help="comma list of target sides (hologram is twice each)")
    ap.add_argument("--levels", type=int, default=256)
    ap.add_argument("--kind", choices=["phase", "amplitude"], default="phase")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--horizon", type=int, default=50)
    ap.add_argument("--zero-outside", action="store_true")
    ap.add_argument("--out", default="resolution_sweep_results.json")
    ap.add_argument("--plot-dir", default=None)
    args = ap.parse_args(argv)
    resolutions = args.resolutions if isinstance(args.resolutions, list) else _ints(args.resolutions)

    plan = ExperimentPlan(
        images=[args.image],
        resolutions=resolutions,
        level_counts=[args.levels],
        kind=args.kind,
        runs_per_cell=args.runs,
        iteration_horizon=args.horizon,
        zero_outside_target=args.zero_outside,
    )
    results = run_plan(plan, progress=lambda line: print(line, file=sys.stderr))
    for cell in results.cells:
        if cell.error is not None:
            print(f"cell failed ({cell.resolution}): {cell.error}", file=sys.stderr)
            continue
        value = cell.convergence["value"] if cell.convergence else cell.mean_nmse[-1]
        n = cell.convergence["n"] if cell.convergence else "-"
        print(f"  {cell.resolution:>4} px target: plateau NMSE {value:.6g} "
              f"(iteration {n}), {cell.timing['mean_iteration_ms']:.2f} ms/iteration")

    export_results(results, args.out)
    print(f"results -> {args.out}")
    if args.plot_dir:
        for path in emit_plot_data(results, args.plot_dir):
            print(f"plot table -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
