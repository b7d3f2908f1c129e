"""Command-line front end.

Subcommands: `generate` (one hologram + metric summary), `bench` (run a
plan file and export JSON results), `fit` / `predict` (runtime model),
`plotdata` (CSV tables from a results document). Exit codes: 0 success,
1 usage error, 2 input error, 3 partial benchmark failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .algorithms import AlgorithmConfig, run
from .field import embed_target
from .harness import (
    ExperimentPlan,
    emit_plot_data,
    export_results,
    print_progress,
    read_results,
    run_plan,
)
from .field import fft2_centered
from .images import resolve_image, SYNTHETIC_IMAGES
from .metrics import detect_convergence, detect_cycle, metric_report
from .modulation import ModulationScheme, Window, nearest_indices
from .runtime import RuntimeModel, fit_runtime_model, measure_iteration_times, predict_runtime

USAGE_ERROR = 1
INPUT_ERROR = 2
PARTIAL_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    # the interface contract reserves exit code 2 for input errors, so
    # argparse usage failures exit 1 instead of its default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _window(text: str) -> Window:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x0,y0,x1,y1")
    try:
        x0, y0, x1, y1 = (int(p) for p in parts)
        return Window(x0, y0, x1, y1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _sizes(text: str) -> list:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holobench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="compute one hologram and report metrics")
    gen.add_argument("--image", required=True,
                     help=f"synthetic id ({', '.join(SYNTHETIC_IMAGES)}) or raster path")
    gen.add_argument("--levels", type=int, required=True, help="modulation level count (>= 2)")
    gen.add_argument("--kind", choices=["phase", "amplitude"], default="phase")
    gen.add_argument("--variant", choices=["gs", "wgs", "lt"], default="gs")
    gen.add_argument("--beta", type=float, default=None, help="wgs correction weight")
    gen.add_argument("--window", type=_window, default=None, help="lt window x0,y0,x1,y1")
    gen.add_argument("--start", choices=["random", "backproject"], default="random")
    gen.add_argument("--iterations", type=int, default=30)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--resolution", type=int, default=128,
                     help="target side in pixels (synthetic ids and resized files)")
    gen.add_argument("--zero-outside", action="store_true",
                     help="constrain the replay field to dark outside the target quadrant")
    gen.add_argument("--out", default=None,
                     help="write the level-index raster here (.npy exact, .png 8/16-bit)")
    gen.add_argument("--json", action="store_true", help="machine-readable summary on stdout")

    bench = sub.add_parser("bench", help="run an experiment plan")
    bench.add_argument("plan", help="plan JSON path")
    bench.add_argument("--out", required=True, help="results JSON path")
    bench.add_argument("--plot-dir", default=None, help="also emit CSV plot tables here")

    fit = sub.add_parser("fit", help="fit the runtime model")
    fit.add_argument("--measurements", default=None,
                     help="JSON list of [nx, ny, iterations, total_ms] rows")
    fit.add_argument("--measure", type=_sizes, default=None,
                     help="measure locally at these hologram sizes, e.g. 128,256,512")
    fit.add_argument("--iterations", type=int, default=8)
    fit.add_argument("--levels", type=int, default=16)
    fit.add_argument("--repeats", type=int, default=3)
    fit.add_argument("--out", required=True, help="model JSON path")

    pred = sub.add_parser("predict", help="predict a run's wall time from a model")
    pred.add_argument("--model", required=True, help="model JSON path")
    pred.add_argument("--size", type=int, required=True, help="hologram width Nx")
    pred.add_argument("--size-y", type=int, default=None, help="hologram height Ny (default: Nx)")
    pred.add_argument("--iterations", type=int, required=True)
    pred.add_argument("--json", action="store_true")

    plot = sub.add_parser("plotdata", help="emit CSV plot tables from results")
    plot.add_argument("results", help="results JSON path")
    plot.add_argument("--out-dir", required=True)

    return parser


def _write_raster(indices: np.ndarray, levels: int, path: str) -> None:
    if path.endswith(".npy"):
        np.save(path, indices.astype(np.uint16 if levels > 256 else np.uint8))
        return
    if path.endswith(".png"):
        from PIL import Image

        if levels <= 256:
            Image.fromarray(indices.astype(np.uint8), mode="L").save(path)
        else:
            Image.fromarray(indices.astype(np.int32), mode="I").save(path)
        return
    raise ValueError(f"unsupported raster extension: {path} (use .npy or .png)")


def cmd_generate(args) -> int:
    try:
        target_img = resolve_image(args.image, args.resolution)
        scheme = ModulationScheme(args.kind, args.levels)
        start = "back_projection" if args.start == "backproject" else args.start
        config = AlgorithmConfig(
            scheme=scheme,
            variant=args.variant,
            start=start,
            max_iterations=args.iterations,
            beta=args.beta,
            window=args.window,
            rng_seed=args.seed,
            zero_outside_target=args.zero_outside,
        )
    except (ValueError, FileNotFoundError) as exc:
        print(f"holobench: {exc}", file=sys.stderr)
        return INPUT_ERROR

    target = embed_target(target_img)
    try:
        trace = run(config, target)
    except ValueError as exc:  # e.g. window outside the hologram plane
        print(f"holobench: {exc}", file=sys.stderr)
        return INPUT_ERROR

    final = trace.final_hologram
    convergence = detect_convergence(trace.mse_pi)
    cycle = detect_cycle(trace.hologram_hashes)
    n = args.resolution
    replay = fft2_centered(final.data, "forward")[:n, :n]
    # report in the target's [0,1] units (same scale convention as the trace)
    t_energy = float(np.sum(target_img**2))
    r_energy = float(np.sum(replay.real**2 + replay.imag**2))
    if t_energy > 0.0 and r_energy > 0.0:
        replay = replay / np.sqrt(r_energy / t_energy)
    report = metric_report(target_img, replay)

    if args.out:
        try:
            _write_raster(nearest_indices(final, scheme), args.levels, args.out)
        except ValueError as exc:
            print(f"holobench: {exc}", file=sys.stderr)
            return INPUT_ERROR

    summary = {
        "image": args.image,
        "resolution": args.resolution,
        "levels": args.levels,
        "kind": args.kind,
        "variant": args.variant,
        "start": start,
        "iterations": args.iterations,
        "seed": args.seed,
        "final_mse_pi": trace.mse_pi[-1],
        "final_replay": {"mse_pi": report.mse_pi, "mse_ps": report.mse_ps, "ssim": report.ssim},
        "convergence": None if convergence is None else {"n": convergence.n, "value": convergence.value},
        "cycle": None if cycle is None else {"period": cycle.period, "onset": cycle.onset},
        "out": args.out,
    }
    if args.json:
        json.dump(summary, sys.stdout)
        sys.stdout.write("\n")
    else:
        for key in ("final_mse_pi", "final_replay", "convergence", "cycle", "out"):
            print(f"{key}: {summary[key]}")
    return 0


def cmd_bench(args) -> int:
    try:
        with open(args.plan) as fh:
            plan_doc = json.load(fh)
        plan = ExperimentPlan.from_jsonable(plan_doc)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"holobench: bad plan: {exc}", file=sys.stderr)
        return INPUT_ERROR
    problems = plan.validate()
    if problems:
        for p in problems:
            print(f"holobench: plan: {p}", file=sys.stderr)
        return INPUT_ERROR

    results = run_plan(plan, progress=print_progress)
    export_results(results, args.out)
    if args.plot_dir:
        emit_plot_data(results, args.plot_dir)
    failed = results.failed_cells
    if failed:
        for cell in failed:
            print(f"holobench: cell failed ({cell.image}@{cell.resolution}): {cell.error}",
                  file=sys.stderr)
        return PARTIAL_FAILURE
    return 0


def cmd_fit(args) -> int:
    if (args.measurements is None) == (args.measure is None):
        print("holobench: fit needs exactly one of --measurements / --measure", file=sys.stderr)
        return USAGE_ERROR
    try:
        if args.measurements is not None:
            with open(args.measurements) as fh:
                rows = json.load(fh)
        else:
            rows = measure_iteration_times(
                args.measure, iterations=args.iterations,
                levels=args.levels, repeats=args.repeats,
            )
        model = fit_runtime_model(rows)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"holobench: {exc}", file=sys.stderr)
        return INPUT_ERROR
    doc = {
        "c_itr1": model.c_itr1,
        "c_itr2": model.c_itr2,
        "c_machine": model.c_machine,
        "c_precision": model.c_precision,
        "c_software": model.c_software,
        "log_base": model.log_base,
        "r_squared": model.r_squared,
        "residuals_ms": list(model.residuals_ms),
        "measurements": [list(r) for r in rows],
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"c_itr1={model.c_itr1!r} c_itr2={model.c_itr2!r} r_squared={model.r_squared!r}")
    return 0


def cmd_predict(args) -> int:
    try:
        with open(args.model) as fh:
            doc = json.load(fh)
        model = RuntimeModel(
            c_itr1=doc["c_itr1"],
            c_itr2=doc["c_itr2"],
            c_machine=doc.get("c_machine", 1.0),
            c_precision=doc.get("c_precision", 1.0),
            c_software=doc.get("c_software", 1.0),
            log_base=doc.get("log_base", 2.0),
        )
        ny = args.size_y if args.size_y is not None else args.size
        ms = predict_runtime(model, args.size, ny, args.iterations)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"holobench: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.json:
        json.dump({"nx": args.size, "ny": ny, "iterations": args.iterations,
                   "predicted_ms": ms}, sys.stdout)
        sys.stdout.write("\n")
    else:
        print(f"predicted_ms: {ms!r}")
    return 0


def cmd_plotdata(args) -> int:
    try:
        doc = read_results(args.results)
        written = emit_plot_data(doc, args.out_dir)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"holobench: {exc}", file=sys.stderr)
        return INPUT_ERROR
    for path in written:
        print(path)
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "bench": cmd_bench,
    "fit": cmd_fit,
    "predict": cmd_predict,
    "plotdata": cmd_plotdata,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
