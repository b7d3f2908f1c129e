"""Shared test oracles.

The oracles here are written independently of the package's own code
paths (no calls into numpy.fft or holobench internals) so that agreement
is evidence, not tautology.
"""

import numpy as np


def dft2_centered_oracle(arr: np.ndarray, direction: str = "forward") -> np.ndarray:
    """Direct O(N^4) centred 2-D DFT.

    Both planes are centred: index u maps to frequency (u - Nx/2), index x
    to position (x - Nx/2). Forward is unnormalised; inverse conjugates the
    kernel and divides by Nx*Ny. Equals fftshift(F(fftshift(.))) for even
    dimensions, derived by hand, computed by literal summation.
    """
    arr = np.asarray(arr, dtype=np.complex128)
    ny, nx = arr.shape
    hx, hy = nx // 2, ny // 2
    sign = -1.0 if direction == "forward" else 1.0
    x = np.arange(nx) - hx
    y = np.arange(ny) - hy
    out = np.empty((ny, nx), dtype=np.complex128)
    for v in range(ny):
        for u in range(nx):
            phase = sign * 2.0 * np.pi * (
                (u - hx) * x[None, :] / nx + (v - hy) * y[:, None] / ny
            )
            out[v, u] = np.sum(arr * np.exp(1j * phase))
    if direction == "inverse":
        out /= nx * ny
    return out


def nearest_index_oracle(arr: np.ndarray, constraint: np.ndarray) -> np.ndarray:
    """Exhaustive nearest-constraint search: for every pixel, the argmin of
    Euclidean distance over all constraint values; ties resolve to the
    first (lowest) index via argmin's first-occurrence rule."""
    flat = np.asarray(arr, dtype=np.complex128).ravel()
    d = np.abs(flat[:, None] - constraint[None, :])
    return np.argmin(d, axis=1).reshape(np.shape(arr))


def ssim_oracle(t: np.ndarray, r: np.ndarray, k1=0.01, k2=0.03, data_range=1.0) -> float:
    """Single-window SSIM recomputed from the definition with explicit
    accumulation loops (population statistics)."""
    t = np.asarray(t, dtype=np.float64).ravel()
    r = np.asarray(r, dtype=np.float64).ravel()
    n = t.size
    mt = sum(t) / n
    mr = sum(r) / n
    vt = sum((a - mt) ** 2 for a in t) / n
    vr = sum((b - mr) ** 2 for b in r) / n
    cov = sum((a - mt) * (b - mr) for a, b in zip(t, r)) / n
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    return ((2 * mt * mr + c1) * (2 * cov + c2)) / (
        (mt * mt + mr * mr + c1) * (vt + vr + c2)
    )


def convergence_oracle(series, epsilon=1e-3):
    """Brute-force plateau scan mirroring the stated definition: the level
    is the mean of the trailing max(4, len//10) values; return the smallest
    1-based n with every |x_t - level| < epsilon for t in [n, 2n]."""
    xs = list(map(float, series))
    size = len(xs)
    tail = min(size, max(4, size // 10))
    level = sum(xs[-tail:]) / tail
    for n in range(1, size // 2 + 1):
        window = xs[n - 1 : 2 * n]
        if all(abs(x - level) < epsilon for x in window):
            return n, level
    return None


def cycle_oracle(trace):
    """Brute-force smallest-period/earliest-onset scan: for each period p,
    try onsets from 0 upward and accept the first onset whose comparisons
    all hold, requiring at least one comparison."""
    items = list(trace)
    n = len(items)
    for period in range(1, n):
        for onset in range(0, n - period):
            if onset > n - 1 - period:
                break
            if all(items[t] == items[t + period] for t in range(onset, n - period)):
                return period, onset
    return None
