"""Test images: deterministic synthetic stand-ins plus raster loading.

The stand-ins substitute for the standard photographic test corpus at
desk scale: `checkerboard` (8 blocks per side, structure scales with
resolution), `gradient` (corner-to-corner ramp) and `noise` (seeded
uniform texture). Raster files are loaded as [0,1] grayscale amplitudes;
`scripts/fetch_test_corpus.py` pulls the real corpus for full-scale runs.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image

__all__ = ["SYNTHETIC_IMAGES", "synthetic_image", "load_image", "resolve_image"]

SYNTHETIC_IMAGES = ("checkerboard", "gradient", "noise")

_NOISE_SEED = 0x5EED


def synthetic_image(name: str, size: int) -> np.ndarray:
    """A size x size float64 image in [0, 1]."""
    if size < 2:
        raise ValueError(f"image size must be >= 2, got {size}")
    if name == "checkerboard":
        block = max(1, size // 8)
        y, x = np.indices((size, size))
        return (((y // block) + (x // block)) % 2).astype(np.float64)
    if name == "gradient":
        ramp = np.linspace(0.0, 1.0, size)
        return (ramp[:, None] + ramp[None, :]) / 2.0
    if name == "noise":
        rng = np.random.default_rng(_NOISE_SEED + size)
        return rng.uniform(0.0, 1.0, size=(size, size))
    raise ValueError(f"unknown synthetic image {name!r}")


def load_image(path: str) -> np.ndarray:
    """Load a raster file as a [0, 1] grayscale amplitude map.

    8-bit (or colour, via the usual luma weights) input; value v maps to
    v/255.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"image not found: {path}")
    with Image.open(path) as img:
        gray = img.convert("L")
        arr = np.asarray(gray, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"zero-size image: {path}")
    return arr / 255.0


def _resize(arr: np.ndarray, size: int) -> np.ndarray:
    # float-mode resampling; never quantises amplitudes back to 8 bits
    img = Image.fromarray(arr.astype(np.float32), mode="F")
    out = img.resize((size, size), Image.BILINEAR)
    return np.asarray(out, dtype=np.float64).clip(0.0, 1.0)


def resolve_image(name_or_path: str, size: int) -> np.ndarray:
    """Synthetic id or raster path, as a size x size [0, 1] image.

    Files are centre-cropped square first, then resampled.
    """
    if name_or_path in SYNTHETIC_IMAGES:
        return synthetic_image(name_or_path, size)
    arr = load_image(name_or_path)
    h, w = arr.shape
    side = min(h, w)
    y0 = (h - side) // 2
    x0 = (w - side) // 2
    arr = arr[y0 : y0 + side, x0 : x0 + side]
    if side != size:
        arr = _resize(arr, size)
    return arr
