"""Deterministic, seedable image-corruption kernels and ordered composition.

All randomness flows through numpy's PCG64 seeded from an explicit 64-bit
seed; identical (image, parameters, seed) triples give bit-identical output.
Sub-seeds for composed steps come from ``derive_seed(seed, step_index)``, so
reordering a sequence reassigns which random stream drives which kernel.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .image import Image

__all__ = [
    "Kind",
    "PerturbationStep",
    "derive_seed",
    "apply_salt_pepper",
    "apply_gaussian_noise",
    "rotate",
    "apply_sequence",
    "apply_step",
]


class Kind(str, enum.Enum):
    SALT_PEPPER = "SP"
    GAUSSIAN = "GA"
    ROTATION = "ROT"
    IDENTITY = "ID"


@dataclass(frozen=True)
class PerturbationStep:
    """One corruption: a kind plus its intensity.

    Intensity meaning by kind: SALT_PEPPER = fraction of pixels hit (in [0,1]),
    GAUSSIAN = noise standard deviation on the [0,1] intensity scale (>= 0),
    ROTATION = signed degrees in (-360, 360), positive clockwise. IDENTITY
    ignores intensity.
    """

    kind: Kind
    intensity: float = 0.0

    def __post_init__(self):
        k, v = self.kind, self.intensity
        if not math.isfinite(v):
            raise ParameterError(f"{k.value} intensity must be finite")
        if k is Kind.SALT_PEPPER and not 0.0 <= v <= 1.0:
            raise ParameterError(f"salt-pepper density must be in [0, 1], got {v}")
        if k is Kind.GAUSSIAN and v < 0.0:
            raise ParameterError(f"gaussian sigma must be >= 0, got {v}")
        if k is Kind.ROTATION and not -360.0 < v < 360.0:
            raise ParameterError(f"rotation degrees must be in (-360, 360), got {v}")

    @property
    def is_identity(self) -> bool:
        return self.kind is Kind.IDENTITY or self.intensity == 0.0


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic 64-bit sub-seed for a position in a seeding tree.

    Defined as the first uint64 word of PCG64 state material produced by
    ``np.random.SeedSequence([seed, *path])``; stable across platforms.
    """
    ss = np.random.SeedSequence([int(seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def apply_salt_pepper(img: Image, density: float, seed: int) -> Image:
    """Set round(density * W * H) distinct pixel positions to 0.0 or 1.0.

    Positions are drawn without replacement; a fair coin per hit pixel picks
    salt (1.0) or pepper (0.0), applied to every channel of that pixel.
    """
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"salt-pepper density must be in [0, 1], got {density}")
    n_hit = round(density * img.width * img.height)
    if n_hit == 0:
        return Image(img.pixels.copy())
    rng = _rng(seed)
    flat = rng.choice(img.width * img.height, size=n_hit, replace=False)
    values = np.where(rng.random(n_hit) < 0.5, 1.0, 0.0)
    out = img.pixels.copy()
    rows, cols = np.divmod(flat, img.width)
    out[rows, cols, :] = values[:, np.newaxis]
    return Image(out)


def apply_gaussian_noise(img: Image, sigma: float, seed: int) -> Image:
    """Add i.i.d. zero-mean normal noise of the given sigma, then clamp to [0,1]."""
    if sigma < 0.0:
        raise ParameterError(f"gaussian sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return Image(img.pixels.copy())
    noise = _rng(seed).normal(0.0, sigma, size=img.pixels.shape)
    return Image(np.clip(img.pixels + noise, 0.0, 1.0))


def rotate(img: Image, degrees: float) -> Image:
    """Rotate about the image center, positive = clockwise.

    Output keeps the input dimensions; bilinear resampling; source positions
    outside the image fill with 0.0. 0 degrees is the exact identity.
    """
    if not -360.0 < degrees < 360.0:
        raise ParameterError(f"rotation degrees must be in (-360, 360), got {degrees}")
    if degrees == 0.0:
        return Image(img.pixels.copy())
    h, w = img.height, img.width
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)

    ys, xs = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    dx, dy = xs - cx, ys - cy
    # inverse map: rotate output coords by -theta (screen coords, y down)
    src_x = cx + dx * cos_t + dy * sin_t
    src_y = cy - dx * sin_t + dy * cos_t

    x0 = np.floor(src_x)
    y0 = np.floor(src_y)
    fx = src_x - x0
    fy = src_y - y0
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)

    def sample(yi, xi):
        inside = (yi >= 0) & (yi < h) & (xi >= 0) & (xi < w)
        vals = img.pixels[np.clip(yi, 0, h - 1), np.clip(xi, 0, w - 1), :]
        return np.where(inside[:, :, np.newaxis], vals, 0.0)

    fx3 = fx[:, :, np.newaxis]
    fy3 = fy[:, :, np.newaxis]
    out = (
        sample(y0, x0) * (1 - fx3) * (1 - fy3)
        + sample(y0, x0 + 1) * fx3 * (1 - fy3)
        + sample(y0 + 1, x0) * (1 - fx3) * fy3
        + sample(y0 + 1, x0 + 1) * fx3 * fy3
    )
    return Image(np.clip(out, 0.0, 1.0))


def apply_step(img: Image, step: PerturbationStep, seed: int) -> Image:
    if step.kind is Kind.SALT_PEPPER:
        return apply_salt_pepper(img, step.intensity, seed)
    if step.kind is Kind.GAUSSIAN:
        return apply_gaussian_noise(img, step.intensity, seed)
    if step.kind is Kind.ROTATION:
        return rotate(img, step.intensity)
    return Image(img.pixels.copy())


def apply_sequence(img: Image, steps, seed: int) -> Image:
    """Apply steps strictly in order; step i draws from derive_seed(seed, i)."""
    out = img
    for i, step in enumerate(steps):
        out = apply_step(out, step, derive_seed(seed, i))
    if out is img:
        out = Image(img.pixels.copy())
    return out
