"""Hologram generation by iterative Fourier projection, plus a benchmark rig.

The core loop alternates between the hologram and replay planes through a
centred 2-D FFT pipeline, re-imposing the target amplitude on one side
and the modulator's constraint set on the other. Around it: quantisers
for discrete/continuous phase and amplitude modulation, replay quality
metrics with plateau convergence and cycle detection, a sweep harness
with seeded statistics and JSON export, and a heuristic runtime model.
"""

from .algorithms import AlgorithmConfig, IterationTrace, run, start_back_projection, start_random
from .field import (
    ComplexField,
    admissible_fft_sizes,
    bit_hash,
    embed_target,
    fft2_centered,
    fft_1d_rows,
    fftshift,
    transpose,
)
from .harness import (
    CellResult,
    ExperimentPlan,
    ResultSet,
    VariantSpec,
    emit_plot_data,
    export_results,
    read_results,
    rerun_cell,
    run_plan,
)
from .images import SYNTHETIC_IMAGES, load_image, resolve_image, synthetic_image
from .metrics import (
    Convergence,
    Cycle,
    MetricReport,
    NormalizationTable,
    detect_convergence,
    detect_cycle,
    metric_report,
    mse_pi,
    mse_ps,
    nmse,
    ssim,
)
from .modulation import (
    ModulationScheme,
    QuantisationDelta,
    Window,
    constraint_set,
    nearest_indices,
    quantise_nn,
    quantise_weighted,
    quantise_windowed,
)
from .runtime import (
    PRECISION_TIME_FACTORS,
    RuntimeModel,
    fit_runtime_model,
    measure_iteration_times,
    precision_factor,
    predict_runtime,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "IterationTrace",
    "run",
    "start_back_projection",
    "start_random",
    "ComplexField",
    "admissible_fft_sizes",
    "bit_hash",
    "embed_target",
    "fft2_centered",
    "fft_1d_rows",
    "fftshift",
    "transpose",
    "CellResult",
    "ExperimentPlan",
    "ResultSet",
    "VariantSpec",
    "emit_plot_data",
    "export_results",
    "read_results",
    "rerun_cell",
    "run_plan",
    "SYNTHETIC_IMAGES",
    "load_image",
    "resolve_image",
    "synthetic_image",
    "Convergence",
    "Cycle",
    "MetricReport",
    "NormalizationTable",
    "detect_convergence",
    "detect_cycle",
    "metric_report",
    "mse_pi",
    "mse_ps",
    "nmse",
    "ssim",
    "ModulationScheme",
    "QuantisationDelta",
    "Window",
    "constraint_set",
    "nearest_indices",
    "quantise_nn",
    "quantise_weighted",
    "quantise_windowed",
    "PRECISION_TIME_FACTORS",
    "RuntimeModel",
    "fit_runtime_model",
    "measure_iteration_times",
    "precision_factor",
    "predict_runtime",
]
