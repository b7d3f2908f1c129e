"""Benchmark harness: sweep plans, seeded runs, statistics and export.

A plan crosses images x resolutions x level counts x starts x variants
into cells; every cell runs `runs_per_cell` seeded runs of the iteration
loop, and the harness reports mean NMSE curves with 2-sigma standard-error
intervals, plateau convergence, cycle reports and timing. Results go to a
single JSON document whose recorded seeds reproduce every curve
bit-exactly; plot-ready CSV tables are derived from that document.
"""

from __future__ import annotations

import csv
import datetime as _dt
import itertools
import json
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algorithms import AlgorithmConfig, run
from .field import embed_target
from .images import resolve_image
from .metrics import NormalizationTable, detect_convergence, detect_cycle
from .modulation import ModulationScheme, Window

__all__ = [
    "VariantSpec",
    "ExperimentPlan",
    "CellResult",
    "ResultSet",
    "run_plan",
    "export_results",
    "read_results",
    "rerun_cell",
    "emit_plot_data",
    "environment_info",
]

RESULTS_SCHEMA = "holobench-results-v1"


@dataclass(frozen=True)
class VariantSpec:
    """One algorithm variant entry of a plan."""

    variant: str = "gs"
    beta: float | None = None
    window: tuple | None = None  # (x0, y0, x1, y1) on the hologram plane

    def label(self) -> str:
        if self.variant == "wgs":
            return f"wgs(beta={self.beta})"
        if self.variant == "lt" and self.window is not None:
            return f"lt(window={','.join(str(v) for v in self.window)})"
        return self.variant

    def to_jsonable(self) -> dict:
        out = {"variant": self.variant}
        if self.beta is not None:
            out["beta"] = self.beta
        if self.window is not None:
            out["window"] = list(self.window)
        return out

    @classmethod
    def from_jsonable(cls, obj) -> "VariantSpec":
        if isinstance(obj, str):
            return cls(variant=obj)
        window = obj.get("window")
        return cls(
            variant=obj.get("variant", "gs"),
            beta=obj.get("beta"),
            window=tuple(window) if window is not None else None,
        )


def _default_variants():
    return [VariantSpec()]


def _default_starts():
    return ["random"]


@dataclass
class ExperimentPlan:
    """Cross product of sweep axes plus run bookkeeping.

    `resolutions` are target-image sides; the hologram plane is twice
    that. `level_counts` entries are ints or None (continuous). `seeds`
    optionally pins the per-run seed list (length runs_per_cell) for every
    cell; otherwise run i uses seed_base + i.
    """

    images: list
    resolutions: list
    level_counts: list
    starts: list = dc_field(default_factory=_default_starts)
    variants: list = dc_field(default_factory=_default_variants)
    kind: str = "phase"
    runs_per_cell: int = 2
    iteration_horizon: int = 30
    seed_base: int = 0
    seeds: list | None = None
    reference_image: str | None = None
    serial: bool = False
    zero_outside_target: bool = False

    def validate(self) -> list:
        """Schema diagnostics; empty list means the plan is runnable."""
        errors = []
        if not self.images:
            errors.append("images: must be non-empty")
        if not self.resolutions:
            errors.append("resolutions: must be non-empty")
        for r in self.resolutions:
            if not isinstance(r, int) or r < 2 or r % 2:
                errors.append(f"resolutions: {r!r} is not an even integer >= 2")
        if not self.level_counts:
            errors.append("level_counts: must be non-empty")
        for lv in self.level_counts:
            if lv is None:
                continue
            if not isinstance(lv, int) or not 2 <= lv <= 2**16:
                errors.append(f"level_counts: {lv!r} is not an integer in [2, 2^16] or null")
        if self.kind not in ("phase", "amplitude"):
            errors.append(f"kind: {self.kind!r} is not 'phase' or 'amplitude'")
        for s in self.starts:
            if s not in ("random", "back_projection"):
                errors.append(f"starts: {s!r} is not 'random' or 'back_projection'")
        for v in self.variants:
            if v.variant not in ("gs", "wgs", "lt"):
                errors.append(f"variants: unknown variant {v.variant!r}")
            if v.variant == "wgs" and (v.beta is None or v.beta <= 0):
                errors.append("variants: wgs needs beta > 0")
            if v.window is not None and len(v.window) != 4:
                errors.append(f"variants: window must be x0,y0,x1,y1, got {v.window!r}")
        if self.runs_per_cell < 2:
            errors.append("runs_per_cell: must be >= 2")
        if self.iteration_horizon < 1:
            errors.append("iteration_horizon: must be >= 1")
        if self.seeds is not None and len(self.seeds) != self.runs_per_cell:
            errors.append("seeds: length must equal runs_per_cell")
        if self.reference_image is not None and self.reference_image not in self.images:
            errors.append("reference_image: not in images")
        return errors

    def cell_keys(self) -> list:
        """(image, resolution, levels, start, variant) in stable order."""
        return list(
            itertools.product(
                self.images, self.resolutions, self.level_counts, self.starts, self.variants
            )
        )

    def run_seeds(self) -> list:
        if self.seeds is not None:
            return [int(s) for s in self.seeds]
        return [self.seed_base + i for i in range(self.runs_per_cell)]

    def to_jsonable(self) -> dict:
        return {
            "images": list(self.images),
            "resolutions": list(self.resolutions),
            "level_counts": ["continuous" if lv is None else lv for lv in self.level_counts],
            "starts": list(self.starts),
            "variants": [v.to_jsonable() for v in self.variants],
            "kind": self.kind,
            "runs_per_cell": self.runs_per_cell,
            "iteration_horizon": self.iteration_horizon,
            "seed_base": self.seed_base,
            "seeds": None if self.seeds is None else list(self.seeds),
            "reference_image": self.reference_image,
            "serial": self.serial,
            "zero_outside_target": self.zero_outside_target,
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "ExperimentPlan":
        known = {
            "images", "resolutions", "level_counts", "starts", "variants", "kind",
            "runs_per_cell", "iteration_horizon", "seed_base", "seeds",
            "reference_image", "serial", "zero_outside_target",
        }
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown plan fields: {sorted(unknown)}")
        kwargs = dict(obj)
        if "level_counts" in kwargs:
            kwargs["level_counts"] = [
                None if lv in (None, "continuous") else lv for lv in kwargs["level_counts"]
            ]
        if "variants" in kwargs:
            kwargs["variants"] = [VariantSpec.from_jsonable(v) for v in kwargs["variants"]]
        return cls(**kwargs)


@dataclass
class CellResult:
    """Statistics for one plan cell (or a recorded failure)."""

    image: str
    resolution: int
    levels: int | None
    kind: str
    start: str
    variant: VariantSpec
    seeds: list
    error: str | None = None
    per_run_mse: list | None = None         # runs x iterations, raw
    mean_mse: list | None = None
    ci2sigma_mse: list | None = None        # 2 * sample std / sqrt(runs)
    mean_nmse: list | None = None
    ci2sigma_nmse: list | None = None
    convergence: dict | None = None         # {"n": ..., "value": ...} on mean NMSE
    cycle: dict | None = None               # {"runs": [...], "detected": k}
    timing: dict | None = None

    def to_jsonable(self) -> dict:
        return {
            "image": self.image,
            "resolution": self.resolution,
            "levels": "continuous" if self.levels is None else self.levels,
            "kind": self.kind,
            "start": self.start,
            "variant": self.variant.to_jsonable(),
            "seeds": list(self.seeds),
            "error": self.error,
            "curves": None
            if self.per_run_mse is None
            else {
                "per_run_mse": self.per_run_mse,
                "mean_mse": self.mean_mse,
                "ci2sigma_mse": self.ci2sigma_mse,
                "mean_nmse": self.mean_nmse,
                "ci2sigma_nmse": self.ci2sigma_nmse,
            },
            "convergence": self.convergence,
            "cycle": self.cycle,
            "timing": self.timing,
        }


@dataclass
class ResultSet:
    plan: ExperimentPlan
    environment: dict
    normalization: dict
    cells: list
    analysis: dict

    def to_jsonable(self) -> dict:
        return {
            "schema": RESULTS_SCHEMA,
            "plan": self.plan.to_jsonable(),
            "environment": self.environment,
            "normalization": self.normalization,
            "cells": [c.to_jsonable() for c in self.cells],
            "analysis": self.analysis,
        }

    @property
    def failed_cells(self) -> list:
        return [c for c in self.cells if c.error is not None]


def environment_info() -> dict:
    return {
        "machine": platform.node() or "unknown",
        "platform": platform.platform(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "precision": "complex128",
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def _worker_count(plan: ExperimentPlan) -> int:
    if plan.serial:
        return 1
    env = os.environ.get("HOLO_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _cell_config(plan_kind: str, levels, start: str, variant: VariantSpec,
                 horizon: int, seed: int, zero_outside: bool) -> AlgorithmConfig:
    scheme = ModulationScheme(plan_kind, levels)
    window = Window(*variant.window) if variant.window is not None else None
    return AlgorithmConfig(
        scheme=scheme,
        variant=variant.variant,
        start=start,
        max_iterations=horizon,
        beta=variant.beta,
        window=window,
        rng_seed=seed,
        zero_outside_target=zero_outside,
    )


def _mse_variation(values) -> float:
    mean = float(np.mean(values))
    if mean == 0.0:
        return 0.0
    return float((np.max(values) - np.min(values)) / mean)


def _run_cell(plan: ExperimentPlan, key) -> CellResult:
    image, resolution, levels, start, variant = key
    seeds = plan.run_seeds()
    result = CellResult(
        image=image,
        resolution=resolution,
        levels=levels,
        kind=plan.kind,
        start=start,
        variant=variant,
        seeds=seeds,
    )
    try:
        target = embed_target(resolve_image(image, resolution))
        traces = []
        for seed in seeds:
            config = _cell_config(
                plan.kind, levels, start, variant,
                plan.iteration_horizon, seed, plan.zero_outside_target,
            )
            traces.append(run(config, target))
    except Exception as exc:  # noqa: BLE001 - a bad cell must not kill the plan
        result.error = f"{type(exc).__name__}: {exc}"
        return result

    curves = np.asarray([t.mse_pi for t in traces])  # runs x iterations
    nruns = curves.shape[0]
    result.per_run_mse = curves.tolist()
    result.mean_mse = curves.mean(axis=0).tolist()
    sem = curves.std(axis=0, ddof=1) / np.sqrt(nruns)
    result.ci2sigma_mse = (2.0 * sem).tolist()

    runs_cycles = []
    detected = 0
    for t in traces:
        found = detect_cycle(t.hologram_hashes)
        if found is None:
            runs_cycles.append(None)
            continue
        detected += 1
        period, onset = found
        tail = t.mse_pi[-period:] if period <= len(t.mse_pi) else t.mse_pi
        runs_cycles.append(
            {"period": period, "onset": onset, "mse_variation": _mse_variation(tail)}
        )
    result.cycle = {"detected": detected, "runs": runs_cycles}

    per_run_total = [float(sum(t.wall_time_ms)) for t in traces]
    total_iters = nruns * plan.iteration_horizon
    result.timing = {
        "mean_iteration_ms": float(sum(per_run_total) / total_iters),
        "per_run_total_ms": per_run_total,
    }
    return result


def _normalization(plan: ExperimentPlan, cells: list) -> tuple[dict, NormalizationTable | None]:
    """Per-image ratios from each image's first grid cell at the horizon."""
    reference = plan.reference_image or plan.images[0]
    final_mse = {}
    for image in plan.images:
        cell = next((c for c in cells if c.image == image), None)
        if cell is not None and cell.error is None and cell.mean_mse:
            final = cell.mean_mse[-1]
            if final > 0:
                final_mse[image] = final
    doc = {"reference": reference, "horizon": plan.iteration_horizon}
    if reference not in final_mse:
        doc["ratios"] = {image: 1.0 for image in plan.images}
        doc["note"] = "reference cell unavailable; ratios defaulted to 1"
        return doc, None
    table = NormalizationTable.from_final_mse(reference, final_mse)
    ratios = {image: table.ratios.get(image, 1.0) for image in plan.images}
    doc["ratios"] = ratios
    return doc, table


def _level_fits(cells: list) -> list:
    """Log-log slope of convergent NMSE vs levels, per sweep group."""
    groups = {}
    for idx, c in enumerate(cells):
        if c.error is not None or c.levels is None:
            continue
        key = (c.image, c.resolution, c.kind, c.start, c.variant.label())
        groups.setdefault(key, []).append((c.levels, idx))
    fits = []
    for key, entries in sorted(groups.items()):
        if len({lv for lv, _ in entries}) < 2:
            continue
        xs, ys = [], []
        for levels, idx in sorted(entries):
            value = _convergent_value(cells[idx])
            if value is None or value <= 0:
                continue
            xs.append(np.log2(levels))
            ys.append(np.log2(value))
        if len(xs) < 2:
            continue
        slope, intercept = np.polyfit(xs, ys, 1)
        pred = np.polyval([slope, intercept], xs)
        ss_res = float(np.sum((np.asarray(ys) - pred) ** 2))
        ss_tot = float(np.sum((np.asarray(ys) - np.mean(ys)) ** 2))
        image, resolution, kind, start, variant = key
        fits.append(
            {
                "image": image,
                "resolution": resolution,
                "kind": kind,
                "start": start,
                "variant": variant,
                "slope": float(slope),
                "intercept": float(intercept),
                "r_squared": 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0,
            }
        )
    return fits


def _convergent_value(cell: CellResult) -> float | None:
    """Plateau estimate of a cell's mean NMSE curve."""
    if cell.convergence is not None:
        return cell.convergence["value"]
    if not cell.mean_nmse:
        return None
    curve = cell.mean_nmse
    tail = min(len(curve), max(4, len(curve) // 10))
    return float(np.mean(curve[-tail:]))


def run_plan(plan: ExperimentPlan, progress=None) -> ResultSet:
    """Execute every cell of a plan and aggregate.

    Cells run in a small worker pool (HOLO_THREADS caps it; plan.serial
    pins it to one). A failing cell records its error and the rest of the
    plan continues. `progress` is an optional callable taking one line of
    text.
    """
    errors = plan.validate()
    if errors:
        raise ValueError("invalid plan: " + "; ".join(errors))
    keys = plan.cell_keys()
    workers = _worker_count(plan)
    say = progress or (lambda line: None)

    cells = [None] * len(keys)
    if workers == 1:
        for i, key in enumerate(keys):
            cells[i] = _run_cell(plan, key)
            say(f"cell {i + 1}/{len(keys)} done ({_key_label(key)})")
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_cell, plan, key): i for i, key in enumerate(keys)}
            for future, i in futures.items():
                cells[i] = future.result()
                say(f"cell {i + 1}/{len(keys)} done ({_key_label(keys[i])})")

    norm_doc, table = _normalization(plan, cells)
    for cell in cells:
        if cell.error is not None or cell.mean_mse is None:
            continue
        ratio = norm_doc["ratios"].get(cell.image, 1.0)
        cell.mean_nmse = [v * ratio for v in cell.mean_mse]
        cell.ci2sigma_nmse = [v * ratio for v in cell.ci2sigma_mse]
        found = detect_convergence(cell.mean_nmse)
        cell.convergence = None if found is None else {"n": found.n, "value": found.value}

    analysis = {"level_fits": _level_fits(cells)}
    return ResultSet(
        plan=plan,
        environment=environment_info(),
        normalization=norm_doc,
        cells=cells,
        analysis=analysis,
    )


def _key_label(key) -> str:
    image, resolution, levels, start, variant = key
    lv = "continuous" if levels is None else levels
    return f"{image}@{resolution} levels={lv} start={start} variant={variant.label()}"


def export_results(results: ResultSet, path: str) -> dict:
    """Write the results document as JSON (stable key order, full float
    precision, no NaN/Inf). Returns the document."""
    doc = results.to_jsonable()
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, allow_nan=False)
        fh.write("\n")
    return doc


def read_results(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != RESULTS_SCHEMA:
        raise ValueError(f"not a results document: {path}")
    return doc


def rerun_cell(doc: dict, cell_index: int) -> list:
    """Re-execute one exported cell from its recorded seeds.

    Returns the per-run error curves; bit-equality with the stored
    curves["per_run_mse"] is the reproducibility check.
    """
    cell = doc["cells"][cell_index]
    plan = doc["plan"]
    levels = cell["levels"]
    levels = None if levels == "continuous" else levels
    variant = VariantSpec.from_jsonable(cell["variant"])
    target = embed_target(resolve_image(cell["image"], cell["resolution"]))
    curves = []
    for seed in cell["seeds"]:
        config = _cell_config(
            cell["kind"], levels, cell["start"], variant,
            plan["iteration_horizon"], seed, plan.get("zero_outside_target", False),
        )
        curves.append(run(config, target).mse_pi)
    return curves


def _open_csv(directory: str, name: str):
    path = os.path.join(directory, name)
    fh = open(path, "w", newline="")
    return path, fh, csv.writer(fh)


def emit_plot_data(results, out_dir: str) -> list:
    """Derive plot-ready CSV tables from a results document.

    error_vs_iteration: one row per (cell, iteration) with mean NMSE + CI.
    convergent_error_vs_levels: one row per discrete-level cell, with
    log2 columns for the level-sweep line. error_vs_resolution: one row
    per (cell, iteration), resolution as the x column.
    time_vs_resolution: one row per cell with the mean iteration time.
    """
    doc = results.to_jsonable() if isinstance(results, ResultSet) else results
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def cell_meta(cell):
        variant = VariantSpec.from_jsonable(cell["variant"]).label()
        return [cell["image"], cell["kind"], cell["start"], variant]

    meta_cols = ["image", "kind", "start", "variant"]
    live = [(i, c) for i, c in enumerate(doc["cells"]) if c["error"] is None]

    path, fh, w = _open_csv(out_dir, "error_vs_iteration.csv")
    with fh:
        w.writerow(["cell"] + meta_cols + ["resolution", "levels", "iteration", "mean_nmse", "ci2sigma"])
        for i, cell in live:
            curves = cell["curves"]
            for it, (m, ci) in enumerate(zip(curves["mean_nmse"], curves["ci2sigma_nmse"]), start=1):
                w.writerow([i] + cell_meta(cell) + [cell["resolution"], cell["levels"], it, repr(m), repr(ci)])
    written.append(path)

    path, fh, w = _open_csv(out_dir, "convergent_error_vs_levels.csv")
    with fh:
        w.writerow(["cell"] + meta_cols + ["resolution", "levels", "log2_levels", "convergent_nmse", "log2_convergent_nmse"])
        for i, cell in live:
            if cell["levels"] == "continuous":
                continue
            value = _convergent_value_doc(cell)
            if value is None or value <= 0:
                continue
            w.writerow(
                [i] + cell_meta(cell)
                + [cell["resolution"], cell["levels"], repr(float(np.log2(cell["levels"]))),
                   repr(value), repr(float(np.log2(value)))]
            )
    written.append(path)

    path, fh, w = _open_csv(out_dir, "error_vs_resolution.csv")
    with fh:
        w.writerow(["cell"] + meta_cols + ["levels", "iteration", "resolution", "mean_nmse"])
        for i, cell in live:
            for it, m in enumerate(cell["curves"]["mean_nmse"], start=1):
                w.writerow([i] + cell_meta(cell) + [cell["levels"], it, cell["resolution"], repr(m)])
    written.append(path)

    path, fh, w = _open_csv(out_dir, "time_vs_resolution.csv")
    with fh:
        w.writerow(["cell"] + meta_cols + ["levels", "resolution", "mean_iteration_ms"])
        for i, cell in live:
            w.writerow([i] + cell_meta(cell) + [cell["levels"], cell["resolution"], repr(cell["timing"]["mean_iteration_ms"])])
    written.append(path)

    return written


def _convergent_value_doc(cell: dict) -> float | None:
    if cell.get("convergence"):
        return cell["convergence"]["value"]
    curve = cell["curves"]["mean_nmse"]
    if not curve:
        return None
    tail = min(len(curve), max(4, len(curve) // 10))
    return float(np.mean(curve[-tail:]))


def print_progress(line: str) -> None:
    print(line, file=sys.stderr, flush=True)
