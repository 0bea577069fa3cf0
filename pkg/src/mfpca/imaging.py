"""
Grayscale image model for the denoising experiments.

Images are 2-D float arrays with intensities in [0, 1]; 8-bit files map
k <-> k/255 exactly.  ``vec``/``mat`` are the column-major reshape pair
the reconstruction algorithm is written against.  The two corruption
models are tile occlusion (whole tiles replaced by uniform noise
patches) and salt-and-pepper (an exact fraction of pixels forced to 0
or 1).

All randomness flows through an explicit ``numpy.random.Generator``;
the package standardizes on the PCG64 bit generator (seedable, portable,
documented), so a given (spec, seed) pair reproduces bit-identical
noise everywhere.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NoiseModel",
    "NoiseSpec",
    "make_rng",
    "validate_image",
    "vec",
    "mat",
    "occlude_tiles",
    "salt_pepper",
    "apply_noise",
    "mse",
    "psnr",
    "PSNR_CAP_DB",
]

# reported instead of +inf when writing PSNR values to CSV
PSNR_CAP_DB = 300.0


class NoiseModel:
    TILE_OCCLUSION = "occlusion"
    SALT_PEPPER = "saltpepper"


@dataclass(frozen=True)
class NoiseSpec:
    model: str = NoiseModel.TILE_OCCLUSION
    tiles_total: int = 16
    tiles_corrupted: int = 3
    tile_size: int = 32
    density: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.model not in (NoiseModel.TILE_OCCLUSION, NoiseModel.SALT_PEPPER):
            raise ValueError("unknown noise model %r" % self.model)
        if self.tiles_corrupted > self.tiles_total:
            raise ValueError("tiles_corrupted must be <= tiles_total")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must be in [0, 1]")


def make_rng(seed):
    """Seeded PCG64 generator; the single source of randomness."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def validate_image(img):
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ValueError("expected a 2-D grayscale image")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    if img.min(initial=0.0) < 0.0 or img.max(initial=0.0) > 1.0:
        raise ValueError("image intensities must lie in [0, 1]")
    return img


def vec(img):
    """Column-major flatten of an image to a vector."""
    return np.asarray(img, dtype=float).reshape(-1, order="F")


def mat(v, h, w):
    """Inverse of :func:`vec`: column-major reshape back to h x w."""
    v = np.asarray(v, dtype=float)
    if v.size != h * w:
        raise ValueError("cannot reshape %d values to %dx%d" % (v.size, h, w))
    return v.reshape((h, w), order="F")


def _open_unit_uniform(rng, size):
    # strictly inside (0, 1): (k + 0.5) / 2^53 never hits an endpoint
    return (rng.integers(0, 1 << 53, size=size).astype(float) + 0.5) / float(1 << 53)


def occlude_tiles(img, spec, rng):
    """Replace `tiles_corrupted` distinct tiles with uniform(0,1) noise.

    The tile grid must cover the image exactly.
    """
    img = validate_image(img)
    if spec.model != NoiseModel.TILE_OCCLUSION:
        raise ValueError("spec is not a tile-occlusion spec")
    h, w = img.shape
    t = spec.tile_size
    if h % t or w % t:
        raise ValueError("image dimensions must be divisible by tile_size")
    grid_h, grid_w = h // t, w // t
    n_tiles = grid_h * grid_w
    if n_tiles != spec.tiles_total:
        raise ValueError(
            "tile grid has %d tiles but spec says %d" % (n_tiles, spec.tiles_total)
        )
    chosen = rng.choice(n_tiles, size=spec.tiles_corrupted, replace=False)
    out = img.copy()
    for tile in np.sort(chosen):
        r, c = divmod(int(tile), grid_w)
        out[r * t : (r + 1) * t, c * t : (c + 1) * t] = _open_unit_uniform(rng, (t, t))
    return out


def salt_pepper(img, spec, rng):
    """Force exactly round(density * H * W) distinct pixels to 0 or 1,
    a fair coin deciding salt vs pepper per pixel."""
    img = validate_image(img)
    if spec.model != NoiseModel.SALT_PEPPER:
        raise ValueError("spec is not a salt-and-pepper spec")
    h, w = img.shape
    count = int(round(spec.density * h * w))
    out = img.copy()
    if count == 0:
        return out
    flat_idx = rng.choice(h * w, size=count, replace=False)
    values = rng.integers(0, 2, size=count).astype(float)
    out.reshape(-1)[flat_idx] = values
    return out


def apply_noise(img, spec, rng):
    if spec.model == NoiseModel.TILE_OCCLUSION:
        return occlude_tiles(img, spec, rng)
    return salt_pepper(img, spec, rng)


def mse(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("shape mismatch: %s vs %s" % (a.shape, b.shape))
    err = a - b
    return float(np.mean(err * err))


def psnr(a, b, peakval=1.0):
    """Peak signal-to-noise ratio in dB; +inf when the inputs agree."""
    if peakval <= 0:
        raise ValueError("peakval must be positive")
    m = mse(a, b)
    if m == 0.0:
        return np.inf
    return float(10.0 * np.log10(peakval * peakval / m))


def cap_psnr(value, cap=PSNR_CAP_DB):
    """Finite stand-in for infinite PSNR, used when serializing."""
    return float(min(value, cap))
