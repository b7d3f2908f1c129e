"""SLM modulation schemes and the quantisers that project fields onto them.

A scheme is either L discrete phase levels (equally spaced on the unit
circle), L discrete amplitude levels (equally spaced on [0, 1]), or the
continuous version of either. Quantisation is nearest-neighbour in the
complex plane; exact ties break toward the lower constraint index, and
zero-amplitude pixels land on index 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldLike, _as_array, _wrap

__all__ = [
    "ModulationScheme",
    "Window",
    "QuantisationDelta",
    "constraint_set",
    "nearest_indices",
    "quantise_nn",
    "quantise_weighted",
    "quantise_windowed",
]

MAX_LEVELS = 2**16

# exactly representable unit-circle values, used to snap constraint sets so
# e.g. binary-phase holograms come out exactly real
_QUADRANT_VALUES = {0: 1.0 + 0.0j, 1: 0.0 + 1.0j, 2: -1.0 + 0.0j, 3: 0.0 - 1.0j}


@dataclass(frozen=True)
class ModulationScheme:
    """What a pixel of the modulator can physically do.

    kind: "phase" (unit-magnitude values) or "amplitude" (real values in
    [0, 1]). levels: number of discrete states, or None for continuous.
    """

    kind: str
    levels: int | None

    def __post_init__(self) -> None:
        if self.kind not in ("phase", "amplitude"):
            raise ValueError(f"invalid scheme: kind must be 'phase' or 'amplitude', got {self.kind!r}")
        if self.levels is not None:
            levels = int(self.levels)
            if levels != self.levels or not 2 <= levels <= MAX_LEVELS:
                raise ValueError(f"invalid scheme: levels must be in [2, {MAX_LEVELS}], got {self.levels!r}")
            object.__setattr__(self, "levels", levels)

    @property
    def is_continuous(self) -> bool:
        return self.levels is None

    @classmethod
    def phase(cls, levels: int | None) -> "ModulationScheme":
        return cls("phase", levels)

    @classmethod
    def amplitude(cls, levels: int | None) -> "ModulationScheme":
        return cls("amplitude", levels)


@dataclass(frozen=True)
class Window:
    """Half-open pixel rectangle [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise ValueError(f"degenerate window: {self}")

    @classmethod
    def full(cls, width: int, height: int) -> "Window":
        return cls(0, 0, width, height)

    def check_bounds(self, width: int, height: int) -> None:
        if self.x0 < 0 or self.y0 < 0 or self.x1 > width or self.y1 > height:
            raise ValueError(f"window {self} outside field bounds {width}x{height}")

    def slices(self) -> tuple[slice, slice]:
        return slice(self.y0, self.y1), slice(self.x0, self.x1)


@dataclass(frozen=True, eq=False)
class QuantisationDelta:
    """Per-pixel corrections: quantised = input + values."""

    values: np.ndarray


def constraint_set(scheme: ModulationScheme) -> np.ndarray | None:
    """Achievable modulation values in constraint-index order.

    Phase: exp(2i*pi*k/L) for k = 0..L-1. Amplitude: k/(L-1). Returns None
    for continuous schemes (unit circle / [0,1] segment respectively).
    """
    if scheme.is_continuous:
        return None
    levels = scheme.levels
    k = np.arange(levels)
    if scheme.kind == "phase":
        vals = np.exp(2j * np.pi * k / levels)
        for idx in np.nonzero((4 * k) % levels == 0)[0]:
            vals[idx] = _QUADRANT_VALUES[4 * idx // levels]
        return vals
    return (k / (levels - 1)).astype(np.complex128)


# Angular/linear rounding decides between the two bracketing levels except
# within this band around the bisector, where the float-evaluated distances
# can tie or cross; there the distances themselves decide (ties -> lower
# index, first-occurrence argmin semantics).
_TIE_BAND = 1e-9


def nearest_indices(field: FieldLike, scheme: ModulationScheme) -> np.ndarray:
    """Constraint index of the nearest achievable value per pixel.

    Nearest means Euclidean distance in the complex plane; exact ties go to
    the lower index (so the wrap-around tie between the last and first phase
    level resolves to 0, and zero-amplitude pixels resolve to index 0).
    """
    if scheme.is_continuous:
        raise ValueError("continuous scheme has no constraint indices")
    arr, _ = _as_array(field)
    levels = scheme.levels
    if scheme.kind == "phase":
        # angular rounding is equivalent to complex-distance argmin for
        # equally spaced unit values; cheap compared with an O(L*N) scan
        kf = np.angle(arr) * (levels / (2.0 * np.pi))
        lo = np.floor(kf)
        frac = kf - lo
        k = np.where(frac > 0.5, lo + 1.0, lo)
        near = np.abs(frac - 0.5) <= _TIE_BAND
        if np.any(near):
            values = constraint_set(scheme)
            a = np.mod(lo[near], levels).astype(np.int64)
            b = np.mod(a + 1, levels)
            z = arr[near]
            da = np.abs(z - values[a])
            db = np.abs(z - values[b])
            k[near] = np.where(
                da < db, a, np.where(db < da, b, np.minimum(a, b))
            )
        return np.mod(k, levels).astype(np.int64)
    scaled = arr.real * (levels - 1)
    lo = np.clip(np.floor(scaled), 0, levels - 1)
    frac = scaled - lo
    k = np.where(frac > 0.5, lo + 1.0, lo)
    near = np.abs(frac - 0.5) <= _TIE_BAND
    if np.any(near):
        values = constraint_set(scheme).real
        a = lo[near].astype(np.int64)
        b = np.minimum(a + 1, levels - 1)
        x = arr.real[near]
        da = np.abs(x - values[a])
        db = np.abs(x - values[b])
        k[near] = np.where(da < db, a, np.where(db < da, b, np.minimum(a, b)))
    return np.clip(k, 0, levels - 1).astype(np.int64)


def quantise_nn(field: FieldLike, scheme: ModulationScheme) -> tuple[FieldLike, QuantisationDelta]:
    """Project every pixel onto the nearest achievable modulation value.

    Returns the quantised field and the per-pixel correction delta with
    quantised == input + delta.values.
    """
    arr, as_field = _as_array(field)
    if scheme.is_continuous:
        if scheme.kind == "phase":
            q = np.exp(1j * np.angle(arr))
        else:
            q = np.clip(arr.real, 0.0, 1.0).astype(np.complex128)
    else:
        q = constraint_set(scheme)[nearest_indices(arr, scheme)]
    delta = QuantisationDelta(q - arr)
    return _wrap(q, as_field), delta


def quantise_weighted(field: FieldLike, scheme: ModulationScheme, beta: float) -> FieldLike:
    """Partially applied constraint: input + beta * delta.

    beta = 1 reduces to plain nearest-neighbour quantisation and returns
    that result bit-exactly; beta in (0, 1) under-corrects, beta > 1
    over-corrects.
    """
    if beta <= 0:
        raise ValueError(f"invalid parameter: beta must be > 0, got {beta}")
    arr, as_field = _as_array(field)
    q, delta = quantise_nn(arr, scheme)
    if beta == 1.0:
        return _wrap(q, as_field)
    return _wrap(arr + beta * delta.values, as_field)


def quantise_windowed(field: FieldLike, scheme: ModulationScheme, window: Window) -> FieldLike:
    """Constraint applied only inside `window`; outside pixels pass through
    bit-identical. A full-field window reduces to quantise_nn."""
    arr, as_field = _as_array(field)
    ny, nx = arr.shape
    window.check_bounds(nx, ny)
    q, _ = quantise_nn(arr, scheme)
    out = arr.copy()
    sl = window.slices()
    out[sl] = q[sl]
    return _wrap(out, as_field)
