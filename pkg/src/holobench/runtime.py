"""Heuristic wall-clock model for the iteration loop.

Per-iteration cost is modelled as
    t_iter = C_machine * C_precision * C_software
             * (C_itr1 + C_itr2 * Nx * Ny * log2(Nx) * log2(Ny))   [ms]
and a run of K iterations costs K * t_iter. C_itr1/C_itr2 are fitted from
measurements; the environment factors default to 1 and scale the whole
prediction (an environment twice as slow doubles it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algorithms import AlgorithmConfig, run
from .field import embed_target
from .images import resolve_image
from .modulation import ModulationScheme

__all__ = [
    "RuntimeModel",
    "fit_runtime_model",
    "predict_runtime",
    "measure_iteration_times",
    "PRECISION_TIME_FACTORS",
    "precision_factor",
]

# Relative per-iteration cost of arithmetic precisions, as (low, high)
# multipliers against single precision. Treat as data: pick a point with
# `precision_factor` when building a model for a non-single-precision stack.
PRECISION_TIME_FACTORS = {
    "half": (0.67, 0.76),
    "single": (1.0, 1.0),
    "double": (1.96, 1.99),
}


def precision_factor(name: str) -> float:
    """Midpoint of the tabulated range for one precision."""
    lo, hi = PRECISION_TIME_FACTORS[name]
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class RuntimeModel:
    """Fitted constants plus environment multipliers.

    c_itr1 (ms) is the per-iteration overhead, c_itr2 (ms) the transform
    cost coefficient; both are expected positive for sane measurements.
    Fit diagnostics ride along when the model came from fit_runtime_model.
    """

    c_itr1: float
    c_itr2: float
    c_machine: float = 1.0
    c_precision: float = 1.0
    c_software: float = 1.0
    log_base: float = 2.0
    r_squared: float | None = None
    residuals_ms: tuple = dc_field(default=())

    def __post_init__(self) -> None:
        for name in ("c_itr1", "c_itr2", "c_machine", "c_precision", "c_software"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _size_term(nx: int, ny: int, log_base: float = 2.0) -> float:
    return nx * ny * math.log(nx, log_base) * math.log(ny, log_base)


def fit_runtime_model(
    measurements,
    c_machine: float = 1.0,
    c_precision: float = 1.0,
    c_software: float = 1.0,
) -> RuntimeModel:
    """Least-squares fit of (c_itr1, c_itr2) from timing measurements.

    measurements: iterable of (nx, ny, iterations, total_ms) rows. The fit
    runs on per-iteration times with the environment factors divided out,
    so the returned model predicts the same measurements back. Needs at
    least two distinct sizes.
    """
    rows = [tuple(m) for m in measurements]
    if not rows:
        raise ValueError("underdetermined: no measurements")
    env = c_machine * c_precision * c_software
    xs, ys = [], []
    for nx, ny, iterations, total_ms in rows:
        if iterations < 1:
            raise ValueError(f"measurement with no iterations: {(nx, ny, iterations, total_ms)}")
        xs.append(_size_term(int(nx), int(ny)))
        ys.append(total_ms / iterations / env)
    if len(set(xs)) < 2:
        raise ValueError("underdetermined: need measurements at >= 2 distinct sizes")
    x = np.asarray(xs)
    y = np.asarray(ys)
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    c1, c2 = float(coef[0]), float(coef[1])
    fitted = design @ coef
    resid = y - fitted
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RuntimeModel(
        c_itr1=c1,
        c_itr2=c2,
        c_machine=c_machine,
        c_precision=c_precision,
        c_software=c_software,
        r_squared=r2,
        residuals_ms=tuple(float(r) for r in resid),
    )


def predict_runtime(model: RuntimeModel, nx: int, ny: int, iterations: int) -> float:
    """Predicted total wall time in ms for `iterations` iterations at nx x ny."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if iterations == 0:
        return 0.0
    per_iter = model.c_itr1 + model.c_itr2 * _size_term(nx, ny, model.log_base)
    return iterations * model.c_machine * model.c_precision * model.c_software * per_iter


def measure_iteration_times(
    sizes,
    iterations: int = 8,
    levels: int = 16,
    repeats: int = 3,
    image: str = "checkerboard",
    seed: int = 0,
):
    """Wall-clock measurements of the plain iteration loop for model fitting.

    `sizes` are hologram-plane sizes (the transform size); the image fills
    one quadrant. Returns one (nx, ny, iterations, total_ms) row per size,
    keeping the fastest repeat to damp scheduler noise.
    """
    rows = []
    scheme = ModulationScheme("phase", levels)
    for n in sizes:
        if n % 2:
            raise ValueError(f"sizes must be even, got {n}")
        target = embed_target(resolve_image(image, n // 2))
        best = math.inf
        for r in range(max(1, repeats)):
            config = AlgorithmConfig(scheme=scheme, max_iterations=iterations, rng_seed=seed + r)
            trace = run(config, target)
            best = min(best, sum(trace.wall_time_ms))
        rows.append((n, n, iterations, best))
    return rows
