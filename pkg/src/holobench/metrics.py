"""Replay-quality metrics and trace analysis.

Two mean-square errors (phase-insensitive on amplitudes, phase-sensitive
on complex values), a global single-window SSIM, per-image NMSE
normalisation, a plateau-based convergence criterion and an exact-repeat
cycle detector for quantised-hologram traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .field import FieldLike, _as_array

__all__ = [
    "mse_pi",
    "mse_ps",
    "ssim",
    "MetricReport",
    "metric_report",
    "NormalizationTable",
    "nmse",
    "Convergence",
    "detect_convergence",
    "Cycle",
    "detect_cycle",
]


def _pair(target: FieldLike, replay: FieldLike) -> tuple[np.ndarray, np.ndarray]:
    t, _ = _as_array(target)
    r, _ = _as_array(replay)
    if t.shape != r.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {r.shape}")
    return t, r


def mse_pi(target: FieldLike, replay: FieldLike) -> float:
    """Phase-insensitive MSE: mean squared amplitude difference."""
    t, r = _pair(target, replay)
    d = np.abs(t) - np.abs(r)
    return float(np.mean(d * d))


def mse_ps(target: FieldLike, replay: FieldLike) -> float:
    """Phase-sensitive MSE: mean squared complex difference."""
    t, r = _pair(target, replay)
    d = t - r
    return float(np.mean(d.real * d.real + d.imag * d.imag))


def ssim(target, replay, k1: float = 0.01, k2: float = 0.03, data_range: float = 1.0) -> float:
    """Structural similarity computed globally (one window spanning the
    whole image), on real images. Statistics are population (ddof=0).
    """
    t = np.asarray(target, dtype=np.float64)
    r = np.asarray(replay, dtype=np.float64)
    if t.shape != r.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {r.shape}")
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    mt, mr = t.mean(), r.mean()
    vt, vr = t.var(), r.var()
    cov = ((t - mt) * (r - mr)).mean()
    num = (2.0 * mt * mr + c1) * (2.0 * cov + c2)
    den = (mt * mt + mr * mr + c1) * (vt + vr + c2)
    return float(num / den)


@dataclass(frozen=True)
class NormalizationTable:
    """Per-image scale factors putting MSE on the reference image's scale.

    ratio(image) multiplies an image's MSE so that, by construction, every
    image's normalised error meets the reference's at the horizon the table
    was built from. The reference's own ratio is 1.
    """

    reference: str
    ratios: dict

    @classmethod
    def from_final_mse(cls, reference: str, final_mse: dict) -> "NormalizationTable":
        """Build from each image's convergent (end-of-horizon) MSE."""
        if reference not in final_mse:
            raise KeyError(f"no normalizer: reference {reference!r} missing from table inputs")
        ref = final_mse[reference]
        ratios = {}
        for image, value in final_mse.items():
            if value <= 0:
                raise ValueError(f"cannot normalise against non-positive MSE for {image!r}")
            ratios[image] = ref / value
        return cls(reference, ratios)

    def ratio(self, image_id: str) -> float:
        if image_id not in self.ratios:
            raise KeyError(f"no normalizer for image {image_id!r}")
        return self.ratios[image_id]


def nmse(mse_value: float, image_id: str, table: NormalizationTable) -> float:
    """MSE rescaled by the image's normalisation ratio."""
    return mse_value * table.ratio(image_id)


@dataclass(frozen=True)
class MetricReport:
    mse_pi: float
    mse_ps: float
    ssim: float
    nmse: float | None = None


def metric_report(
    target: FieldLike,
    replay: FieldLike,
    data_range: float = 1.0,
    table: NormalizationTable | None = None,
    image_id: str | None = None,
) -> MetricReport:
    """All metrics for one target/replay pair; NMSE only when a
    normalisation table and image id are supplied."""
    t, r = _pair(target, replay)
    e_pi = mse_pi(t, r)
    normalised = None
    if table is not None:
        if image_id is None:
            raise ValueError("image_id required to normalise")
        normalised = nmse(e_pi, image_id, table)
    return MetricReport(
        mse_pi=e_pi,
        mse_ps=mse_ps(t, r),
        ssim=ssim(np.abs(t), np.abs(r), data_range=data_range),
        nmse=normalised,
    )


class Convergence(NamedTuple):
    n: int        # 1-based iteration index where the plateau window starts
    value: float  # plateau estimate L


def detect_convergence(series: Sequence[float], epsilon: float = 1e-3) -> Convergence | None:
    """Smallest n with |x_t - L| < epsilon for every t in [n, 2n] (1-based).

    The plateau level L is estimated as the mean of the trailing
    max(4, len//10) values. Returns None when no window [n, 2n] fits
    inside the series.
    """
    xs = np.asarray(series, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise ValueError("series must be a non-empty 1-D sequence")
    tail = min(xs.size, max(4, xs.size // 10))
    level = float(xs[-tail:].mean())
    for n in range(1, xs.size // 2 + 1):
        window = xs[n - 1 : 2 * n]  # t = n..2n inclusive
        if np.all(np.abs(window - level) < epsilon):
            return Convergence(n, level)
    return None


class Cycle(NamedTuple):
    period: int  # p = 1 is a fixed point
    onset: int   # earliest trace index from which the repetition holds


def detect_cycle(trace: Sequence) -> Cycle | None:
    """Smallest period p >= 1 (with its earliest onset) such that
    trace[t] == trace[t + p] for every t >= onset through the end.

    Entries are compared exactly (intended for bit hashes of quantised
    holograms, where exact equality is meaningful).
    """
    items = list(trace)
    n = len(items)
    for period in range(1, n):
        t = n - 1 - period
        while t >= 0 and items[t] == items[t + period]:
            t -= 1
        onset = t + 1
        if onset <= n - 1 - period:  # at least one comparison held
            return Cycle(period, onset)
    return None
