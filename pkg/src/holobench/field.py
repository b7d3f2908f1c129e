"""Complex field container and the centred 2-D FFT pipeline.

The 2-D transform is assembled from 1-D row transforms, transposes and
quadrant shifts (fftshift o transpose o fft o transpose o fft o fftshift)
rather than calling a monolithic 2-D FFT, mirroring how the pipeline is
composed on SLM compute backends. Forward transforms are unnormalised;
the inverse carries the full 1/(Nx*Ny), accrued as 1/N per 1-D pass.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, Union

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .modulation import ModulationScheme

__all__ = [
    "ComplexField",
    "FieldLike",
    "Direction",
    "fft_1d_rows",
    "transpose",
    "fftshift",
    "fft2_centered",
    "embed_target",
    "admissible_fft_sizes",
    "bit_hash",
]

Direction = Literal["forward", "inverse"]
FieldLike = Union["ComplexField", np.ndarray]


@dataclass(frozen=True, eq=False)
class ComplexField:
    """2-D grid of complex amplitudes, row-major, indexed ``[y, x]``.

    Both dimensions must be even and >= 2: the quadrant shift is then an
    exact involution and conjugate-symmetry checks stay index-exact. The
    backing array is copied and frozen so fields can be shared across
    worker threads without defensive copies.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.complex128, order="C", copy=True)
        if arr.ndim != 2:
            raise ValueError(f"field data must be 2-D, got shape {arr.shape}")
        ny, nx = arr.shape
        if nx < 2 or ny < 2 or nx % 2 or ny % 2:
            raise ValueError(
                f"field dimensions must be even and >= 2, got {nx}x{ny}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def amplitude(self) -> np.ndarray:
        return np.abs(self.data)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2))

    def bit_hash(self) -> str:
        """Digest of the exact bit pattern; bit-equal fields hash equally."""
        return bit_hash(self)


def _as_array(f: FieldLike) -> tuple[np.ndarray, bool]:
    if isinstance(f, ComplexField):
        return f.data, True
    return np.asarray(f, dtype=np.complex128), False


def _wrap(arr: np.ndarray, as_field: bool) -> FieldLike:
    """Return `arr` as-is, or adopt it into a ComplexField without recopying."""
    if not as_field:
        return arr
    out = object.__new__(ComplexField)
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    object.__setattr__(out, "data", arr)
    return out


def _check_direction(direction: str) -> None:
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def fft_1d_rows(field: FieldLike, direction: Direction = "forward") -> FieldLike:
    """1-D FFT of every row (the x axis) independently.

    Forward is unnormalised; inverse scales by 1/Nx per row, so the two
    1-D passes of the 2-D pipeline accrue the full 1/(Nx*Ny) factor.
    """
    arr, as_field = _as_array(field)
    _check_direction(direction)
    if direction == "forward":
        out = np.fft.fft(arr, axis=1)
    else:
        out = np.fft.ifft(arr, axis=1)
    return _wrap(out, as_field)


def transpose(field: FieldLike) -> FieldLike:
    """Swap axes: out[y, x] = in[x, y]."""
    arr, as_field = _as_array(field)
    return _wrap(arr.T.copy(), as_field)


def fftshift(field: FieldLike) -> FieldLike:
    """Swap diagonal quadrants (DC to centre); exact involution for even dims."""
    arr, as_field = _as_array(field)
    ny, nx = arr.shape
    if nx % 2 or ny % 2:
        raise ValueError(f"quadrant shift needs even dimensions, got {nx}x{ny}")
    return _wrap(np.fft.fftshift(arr), as_field)


def fft2_centered(field: FieldLike, direction: Direction = "forward") -> FieldLike:
    """Centred 2-D FFT: fftshift o transpose o fft o transpose o fft o fftshift.

    Composed literally from the 1-D building blocks. DC sits at
    (Ny/2, Nx/2) in both planes; forward is unnormalised and the inverse
    carries 1/(Nx*Ny), so inverse(forward(f)) == f.
    """
    arr, as_field = _as_array(field)
    _check_direction(direction)
    ny, nx = arr.shape
    if nx % 2 or ny % 2:
        raise ValueError(f"centred transform needs even dimensions, got {nx}x{ny}")
    op = np.fft.fft if direction == "forward" else np.fft.ifft
    out = np.fft.fftshift(arr)
    out = op(out, axis=1)
    out = out.T
    out = op(out, axis=1)
    out = out.T
    out = np.fft.fftshift(out)
    return _wrap(out, as_field)


def embed_target(target: np.ndarray, scheme: "ModulationScheme | None" = None) -> ComplexField:
    """Place a square [0,1] amplitude image in the upper-left quadrant of a
    zero field twice its size.

    The doubled canvas leaves the replay plane room for the conjugate twin
    that binary modulation schemes produce; the embedding itself does not
    depend on `scheme` (accepted so call sites can pass their scheme along).
    Output energy equals the target's energy.
    """
    arr = np.asarray(target, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"unsupported geometry: target must be square 2-D, got {arr.shape}")
    n = arr.shape[0]
    if n < 1:
        raise ValueError("unsupported geometry: target is empty")
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, :n] = arr
    return _wrap(out, True)


# FFT backends degrade sharply away from friendly sizes (roughly 2.6x-3.1x
# slower already for generic non-power-of-2 lengths), so sampling points are
# restricted to 2^a times a product of at most two factors from {3, 5, 7}.
_SMOOTH_MULTIPLIERS = (1, 3, 5, 7, 9, 15, 21, 25, 35, 49)
NON_POW2_COST_RANGE = (2.6, 3.1)


def admissible_fft_sizes(lo: int, hi: int) -> list[int]:
    """All FFT-friendly sizes in [lo, hi]: powers of two times up to two
    factors from {3, 5, 7}.

    Utility only - nothing in the pipeline pads to these sizes silently.
    """
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    sizes = set()
    for m in _SMOOTH_MULTIPLIERS:
        p = m
        while p <= hi:
            if p >= lo:
                sizes.add(p)
            p *= 2
    return sorted(sizes)


def bit_hash(field: FieldLike) -> str:
    """Digest of the exact bit pattern of a field's values."""
    arr, _ = _as_array(field)
    arr = np.ascontiguousarray(arr)
    digest = hashlib.blake2b(arr.tobytes(), digest_size=16)
    return digest.hexdigest()
