"""Tests for the wall-clock model: fitting, prediction, measurement."""

from __future__ import annotations

import math

import numpy as np
import pytest

from holobench.runtime import (
    PRECISION_TIME_FACTORS,
    RuntimeModel,
    fit_runtime_model,
    measure_iteration_times,
    precision_factor,
    predict_runtime,
)

C1_REF = 0.71
C2_REF = 1.09e-6


def _synthetic_rows(sizes, c1=C1_REF, c2=C2_REF, iterations=20, env=1.0):
    rows = []
    for n in sizes:
        per_iter = c1 + c2 * n * n * math.log2(n) ** 2
        rows.append((n, n, iterations, env * per_iter * iterations))
    return rows


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


def test_fit_recovers_reference_constants_exactly():
    rows = _synthetic_rows([128, 256, 512, 1024])
    model = fit_runtime_model(rows)
    assert model.c_itr1 == pytest.approx(C1_REF, rel=1e-6)
    assert model.c_itr2 == pytest.approx(C2_REF, rel=1e-6)
    assert model.r_squared == pytest.approx(1.0, abs=1e-12)
    assert len(model.residuals_ms) == len(rows)
    assert all(abs(r) < 1e-9 for r in model.residuals_ms)


def test_fit_divides_environment_factors_out():
    env = 2.5 * 1.975 * 1.2
    rows = _synthetic_rows([128, 256, 512], env=env)
    model = fit_runtime_model(rows, c_machine=2.5, c_precision=1.975, c_software=1.2)
    assert model.c_itr1 == pytest.approx(C1_REF, rel=1e-9)
    assert model.c_itr2 == pytest.approx(C2_REF, rel=1e-9)
    # and the model predicts the raw (environment-inclusive) timings back
    for nx, ny, iters, total in rows:
        assert predict_runtime(model, nx, ny, iters) == pytest.approx(total, rel=1e-9)


def test_fit_handles_noisy_measurements():
    rng = np.random.default_rng(11)
    rows = []
    for n, total in [(r[0], r[3]) for r in _synthetic_rows([64, 128, 256, 512, 1024])]:
        rows.append((n, n, 20, total * rng.uniform(0.98, 1.02)))
    model = fit_runtime_model(rows)
    assert model.c_itr2 == pytest.approx(C2_REF, rel=0.05)
    assert model.r_squared > 0.99


def test_fit_rejects_empty_input():
    with pytest.raises(ValueError, match="no measurements"):
        fit_runtime_model([])


def test_fit_rejects_single_size():
    rows = [(256, 256, 10, 50.0), (256, 256, 20, 100.0)]
    with pytest.raises(ValueError, match=">= 2 distinct sizes"):
        fit_runtime_model(rows)


def test_fit_rejects_zero_iteration_rows():
    rows = [(128, 128, 0, 10.0), (256, 256, 10, 50.0)]
    with pytest.raises(ValueError, match="no iterations"):
        fit_runtime_model(rows)


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------


def test_predict_matches_formula_componentwise():
    model = RuntimeModel(
        c_itr1=0.5, c_itr2=2e-6, c_machine=1.5, c_precision=1.975, c_software=0.9
    )
    nx, ny, iters = 512, 256, 7
    expected = (
        iters
        * 1.5
        * 1.975
        * 0.9
        * (0.5 + 2e-6 * nx * ny * math.log2(nx) * math.log2(ny))
    )
    assert predict_runtime(model, nx, ny, iters) == pytest.approx(expected, rel=1e-12)


def test_predict_zero_iterations_is_zero():
    model = RuntimeModel(c_itr1=0.71, c_itr2=1.09e-6)
    assert predict_runtime(model, 1024, 1024, 0) == 0.0


def test_predict_negative_iterations_raises():
    model = RuntimeModel(c_itr1=0.71, c_itr2=1.09e-6)
    with pytest.raises(ValueError, match="iterations"):
        predict_runtime(model, 1024, 1024, -1)


def test_predict_scales_linearly_with_iterations():
    model = RuntimeModel(c_itr1=0.71, c_itr2=1.09e-6)
    one = predict_runtime(model, 256, 256, 1)
    assert predict_runtime(model, 256, 256, 30) == pytest.approx(30 * one, rel=1e-12)


# ---------------------------------------------------------------------------
# environment factors
# ---------------------------------------------------------------------------


def test_precision_factor_midpoints():
    assert precision_factor("half") == pytest.approx((0.67 + 0.76) / 2)
    assert precision_factor("single") == 1.0
    assert precision_factor("double") == pytest.approx((1.96 + 1.99) / 2)


def test_precision_table_ranges_are_ordered():
    for lo, hi in PRECISION_TIME_FACTORS.values():
        assert lo <= hi


def test_model_rejects_non_finite_constants():
    with pytest.raises(ValueError, match="finite"):
        RuntimeModel(c_itr1=math.nan, c_itr2=1e-6)
    with pytest.raises(ValueError, match="finite"):
        RuntimeModel(c_itr1=0.5, c_itr2=math.inf)


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------


def test_measure_iteration_times_rows():
    rows = measure_iteration_times([32, 64], iterations=2, repeats=1)
    assert len(rows) == 2
    for (nx, ny, iters, total), expected_n in zip(rows, [32, 64]):
        assert (nx, ny, iters) == (expected_n, expected_n, 2)
        assert total > 0.0


def test_measure_iteration_times_rejects_odd_sizes():
    with pytest.raises(ValueError, match="even"):
        measure_iteration_times([33], iterations=1, repeats=1)


def test_measure_then_fit_round_trip_smoke():
    rows = measure_iteration_times([32, 64, 128], iterations=3, repeats=2)
    model = fit_runtime_model(rows)
    # a fit through real timings should at least predict its own inputs
    # to within the fit residuals
    for (nx, ny, iters, total), resid in zip(rows, model.residuals_ms):
        assert predict_runtime(model, nx, ny, iters) == pytest.approx(
            total - resid * iters, rel=1e-9
        )
