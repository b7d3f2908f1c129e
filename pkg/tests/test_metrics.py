"""Metric, normalisation, plateau-detection and cycle-detection tests.

SSIM is verified against the loop-accumulated formula oracle; the plateau
and cycle detectors against brute-force scans of the same definitions.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import convergence_oracle, cycle_oracle, ssim_oracle
from holobench import (
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


# ------------------------------------------------------------------- MSE


def test_mse_pi_hand_value():
    target = np.array([[1, 0], [0, 1]], dtype=np.complex128)
    assert mse_pi(target, np.zeros((2, 2))) == pytest.approx(0.5)
    assert mse_pi(target, target) == 0.0


def test_mse_pi_ignores_phase():
    rng = np.random.default_rng(0)
    t = rng.uniform(0, 1, (8, 8)).astype(np.complex128)
    r = t * np.exp(1j * rng.uniform(0, 2 * np.pi, (8, 8)))
    assert mse_pi(t, r) == pytest.approx(0.0, abs=1e-28)
    assert mse_ps(t, r) > 0.1


def test_mse_ps_hand_value():
    t = np.array([[1 + 1j, 0]])
    r = np.array([[0, 1j]])
    # |1+1j|^2 = 2, |0-1j|^2 = 1 -> mean 1.5
    assert mse_ps(t, r) == pytest.approx(1.5)


def test_mse_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        mse_pi(np.zeros((2, 2)), np.zeros((2, 4)))
    with pytest.raises(ValueError, match="dimension mismatch"):
        mse_ps(np.zeros((2, 2)), np.zeros((4, 2)))


# ------------------------------------------------------------------ SSIM


def test_ssim_matches_formula_oracle():
    rng = np.random.default_rng(1)
    t = rng.uniform(0, 1, (12, 12))
    r = np.clip(t + rng.normal(0, 0.1, (12, 12)), 0, 1)
    assert ssim(t, r) == pytest.approx(ssim_oracle(t, r), rel=1e-12)


def test_ssim_identity_is_one():
    img = np.random.default_rng(2).uniform(0, 1, (16, 16))
    assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)


def test_ssim_degrades_with_noise():
    rng = np.random.default_rng(3)
    t = rng.uniform(0, 1, (32, 32))
    light = np.clip(t + rng.normal(0, 0.02, t.shape), 0, 1)
    heavy = np.clip(t + rng.normal(0, 0.5, t.shape), 0, 1)
    assert ssim(t, heavy) < ssim(t, light) <= 1.0


def test_ssim_data_range_parameter():
    rng = np.random.default_rng(4)
    t = rng.uniform(0, 255, (8, 8))
    r = np.clip(t + rng.normal(0, 10, t.shape), 0, 255)
    assert ssim(t, r, data_range=255.0) == pytest.approx(
        ssim_oracle(t, r, data_range=255.0), rel=1e-12
    )
    # constant images make the stabilising constants dominate, so the
    # data_range setting visibly changes the score
    a = np.full((4, 4), 0.01)
    b = np.full((4, 4), 0.02)
    assert ssim(a, b, data_range=1.0) == pytest.approx(0.0005 / 0.0006, rel=1e-9)
    assert ssim(a, b, data_range=255.0) > 0.99


def test_ssim_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        ssim(np.zeros((2, 2)), np.zeros((2, 3)))


# ----------------------------------------------------------- normalisation


def test_normalization_ratios():
    table = NormalizationTable.from_final_mse("a", {"a": 0.02, "b": 0.04, "c": 0.01})
    assert table.ratio("a") == 1.0
    assert table.ratio("b") == pytest.approx(0.5)
    assert table.ratio("c") == pytest.approx(2.0)
    assert nmse(0.08, "b", table) == pytest.approx(0.04)


def test_normalization_equalises_at_the_horizon():
    final = {"ref": 0.031, "x": 0.007}
    table = NormalizationTable.from_final_mse("ref", final)
    assert nmse(final["x"], "x", table) == pytest.approx(final["ref"])


def test_normalization_errors():
    with pytest.raises(KeyError, match="no normalizer"):
        NormalizationTable.from_final_mse("missing", {"a": 1.0})
    with pytest.raises(ValueError, match="non-positive"):
        NormalizationTable.from_final_mse("a", {"a": 0.0})
    table = NormalizationTable.from_final_mse("a", {"a": 1.0})
    with pytest.raises(KeyError, match="no normalizer for image"):
        table.ratio("unknown")


def test_metric_report_bundles_all_metrics():
    rng = np.random.default_rng(5)
    t = rng.uniform(0, 1, (8, 8)).astype(np.complex128)
    r = t + rng.normal(0, 0.05, (8, 8))
    table = NormalizationTable.from_final_mse("img", {"img": 0.01})
    rep = metric_report(t, r, table=table, image_id="img")
    assert isinstance(rep, MetricReport)
    assert rep.mse_pi == pytest.approx(mse_pi(t, r))
    assert rep.mse_ps == pytest.approx(mse_ps(t, r))
    assert rep.ssim == pytest.approx(ssim(np.abs(t), np.abs(r)))
    assert rep.nmse == pytest.approx(rep.mse_pi * table.ratio("img"))
    assert metric_report(t, r).nmse is None
    with pytest.raises(ValueError, match="image_id"):
        metric_report(t, r, table=table)


# ------------------------------------------------------------ convergence


def test_convergence_constant_series_fires_at_one():
    assert detect_convergence([2.0] * 10) == Convergence(1, 2.0)


def test_convergence_geometric_approach():
    # 1 + 0.5^t crosses the epsilon=1e-3 band between t=9 and t=10
    xs = [1.0 + 0.5**t for t in range(1, 41)]
    got = detect_convergence(xs)
    want = convergence_oracle(xs)
    assert got is not None and want is not None
    assert (got.n, got.value) == (want[0], pytest.approx(want[1]))
    assert got.n == 10


def test_convergence_window_must_fit():
    # strictly descending line: no [n, 2n] window is ever within epsilon
    xs = [1.0 - 0.01 * t for t in range(30)]
    assert detect_convergence(xs) is None
    assert convergence_oracle(xs) is None


def test_convergence_epsilon_parameter():
    xs = [1.0 + 0.5**t for t in range(1, 41)]
    loose = detect_convergence(xs, epsilon=0.1)
    tight = detect_convergence(xs, epsilon=1e-6)
    assert loose.n < 10
    assert tight is None or tight.n > 10


def test_convergence_level_is_trailing_mean():
    xs = [5.0] * 36 + [1.0, 2.0, 3.0, 2.0]  # tail mean = 2.0 (max(4, 40//10))
    got = detect_convergence(xs, epsilon=10.0)
    assert got.value == pytest.approx(2.0)


def test_convergence_input_validation():
    with pytest.raises(ValueError):
        detect_convergence([])
    with pytest.raises(ValueError):
        detect_convergence(np.zeros((3, 3)))


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**16),
    size=st.integers(4, 60),
    epsilon=st.sampled_from([1e-3, 1e-2, 0.1]),
)
def test_convergence_matches_bruteforce_property(seed, size, epsilon):
    rng = np.random.default_rng(seed)
    xs = np.abs(rng.normal(1.0, 0.2, size)) * rng.uniform(0.5, 2.0)
    got = detect_convergence(xs, epsilon=epsilon)
    want = convergence_oracle(xs, epsilon=epsilon)
    if want is None:
        assert got is None
    else:
        assert got is not None
        assert (got.n, got.value) == (want[0], pytest.approx(want[1]))


# ------------------------------------------------------------------ cycle


@pytest.mark.parametrize(
    "trace,expected",
    [
        (list("abcabcabc"), Cycle(3, 0)),
        (list("xxabab"), Cycle(2, 2)),
        (list("aaaa"), Cycle(1, 0)),
        (list("abcd"), None),
        (list("a"), None),
        (list("abab"), Cycle(2, 0)),
        (list("abcbcbc"), Cycle(2, 1)),
    ],
)
def test_cycle_hand_cases(trace, expected):
    assert detect_cycle(trace) == expected
    want = cycle_oracle(trace)
    assert (None if expected is None else (expected.period, expected.onset)) == want


def test_cycle_requires_a_held_comparison():
    # two distinct items: period 1 never holds, period >= 2 has no room
    assert detect_cycle(["p", "q"]) is None


def test_cycle_prefers_smallest_period_then_earliest_onset():
    trace = list("zzzabab")  # period 2 from index 3; period 1 only held in prefix
    assert detect_cycle(trace) == Cycle(2, 3)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**16),
    period=st.integers(1, 6),
    prefix=st.integers(0, 5),
    repeats=st.integers(2, 5),
)
def test_cycle_matches_bruteforce_property(seed, period, prefix, repeats):
    rng = np.random.default_rng(seed)
    block = [int(v) for v in rng.integers(0, 3, period)]
    trace = [int(v) for v in rng.integers(3, 6, prefix)] + block * repeats
    got = detect_cycle(trace)
    want = cycle_oracle(trace)
    assert (None if got is None else (got.period, got.onset)) == want
    if got is not None:
        # returned pair satisfies the defining property
        for t in range(got.onset, len(trace) - got.period):
            assert trace[t] == trace[t + got.period]
