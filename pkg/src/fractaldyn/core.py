"""Raster windows of the complex plane and per-pixel orbit storage.

A window is sampled at pixel centers. Pixel (0, 0) is the top-left corner
of the window (minimum real part, maximum imaginary part); the column
index i grows with the real part and the row index j grows downward,
decreasing the imaginary part. Offsets from the window center are
half-integer multiples of the pixel pitch, which are exact in binary
floating point: on an origin-centered grid the sample points come in
exact +/-z pairs, so symmetric sets rasterize symmetrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class DomainError(ValueError):
    """A point lies outside a map's or flow's valid domain."""


def require_finite(z: complex, name: str = "value") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


class OrbitStatus(IntEnum):
    BOUNDED = 0
    ESCAPED = 1
    INVALID = 2


@dataclass(frozen=True)
class OrbitResult:
    """Boundedness verdict for one seed.

    ``escape_iter`` is the first orbit index whose magnitude exceeded the
    escape radius (None unless escaped); ``last_magnitude`` is the
    magnitude at escape, or the final orbit magnitude for bounded seeds.
    """

    status: OrbitStatus
    escape_iter: int | None
    last_magnitude: float

    @classmethod
    def bounded(cls, magnitude: float) -> "OrbitResult":
        return cls(OrbitStatus.BOUNDED, None, float(magnitude))

    @classmethod
    def escaped(cls, iteration: int, magnitude: float) -> "OrbitResult":
        return cls(OrbitStatus.ESCAPED, int(iteration), float(magnitude))

    @classmethod
    def invalid(cls) -> "OrbitResult":
        return cls(OrbitStatus.INVALID, None, 0.0)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular window of the plane discretized to px_w x px_h pixels."""

    center: complex
    width: float
    height: float
    px_w: int
    px_h: int

    def __post_init__(self):
        require_finite(self.center, "center")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"width must be positive and finite, got {self.width}")
        if not (self.height > 0 and math.isfinite(self.height)):
            raise ValueError(f"height must be positive and finite, got {self.height}")
        if self.px_w < 1 or self.px_h < 1:
            raise ValueError("pixel counts must be >= 1")

    @property
    def dx(self) -> float:
        return self.width / self.px_w

    @property
    def dy(self) -> float:
        return self.height / self.px_h

    @property
    def half_pixel_diag(self) -> float:
        return math.hypot(self.dx, self.dy) / 2.0

    def point_of(self, i: int, j: int) -> complex:
        """Center of pixel (i, j); i indexes columns, j rows (top-down)."""
        if not (0 <= i < self.px_w and 0 <= j < self.px_h):
            raise IndexError(f"pixel ({i}, {j}) outside {self.px_w}x{self.px_h} grid")
        re = self.center.real + (i + 0.5 - self.px_w / 2) * self.dx
        im = self.center.imag - (j + 0.5 - self.px_h / 2) * self.dy
        return complex(re, im)

    def points(self) -> np.ndarray:
        """All pixel centers as a (px_h, px_w) complex array, row-major.

        Uses the same arithmetic as point_of, so entries match it bitwise.
        """
        xs = (np.arange(self.px_w) + 0.5 - self.px_w / 2) * self.dx + self.center.real
        ys = self.center.imag - (np.arange(self.px_h) + 0.5 - self.px_h / 2) * self.dy
        return xs[np.newaxis, :] + 1j * ys[:, np.newaxis]

    def pixel_of(self, z: complex) -> tuple[int, int] | None:
        """Pixel whose center is nearest to z, or None outside the window."""
        z = require_finite(z, "z")
        u = (z.real - self.center.real) / self.dx + self.px_w / 2
        v = (self.center.imag - z.imag) / self.dy + self.px_h / 2
        if not (0.0 <= u <= self.px_w and 0.0 <= v <= self.px_h):
            return None
        i = min(int(u), self.px_w - 1)
        j = min(int(v), self.px_h - 1)
        return i, j

    def pixel_of_array(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized pixel_of: returns (i, j, inside) with inside False for
        non-finite points and points outside the window."""
        re = z.real
        im = z.imag
        with np.errstate(invalid="ignore"):
            u = (re - self.center.real) / self.dx + self.px_w / 2
            v = (self.center.imag - im) / self.dy + self.px_h / 2
            inside = (u >= 0.0) & (u <= self.px_w) & (v >= 0.0) & (v <= self.px_h)
        inside &= np.isfinite(re) & np.isfinite(im)
        i = np.clip(np.floor(np.where(inside, u, 0.0)).astype(np.int64), 0, self.px_w - 1)
        j = np.clip(np.floor(np.where(inside, v, 0.0)).astype(np.int64), 0, self.px_h - 1)
        return i, j, inside

    def scaled(self, factor: float, origin: complex = 0j) -> "GridSpec":
        """Window image under z -> factor*(z - origin) + origin."""
        if factor <= 0:
            raise ValueError("factor must be positive")
        center = factor * (self.center - origin) + origin
        return GridSpec(center, self.width * factor, self.height * factor,
                        self.px_w, self.px_h)

    def affine_image(self, a: complex, b: complex, pad: float = 1.0) -> "GridSpec":
        """Axis-aligned window containing the image under z -> a*z + b.

        For non-real a the image rectangle is rotated; this returns the grid
        scaled by |a| about the mapped center, optionally padded.
        """
        a = complex(a)
        if a == 0:
            raise ValueError("a must be nonzero")
        s = abs(a) * pad
        return GridSpec(a * self.center + b, self.width * s, self.height * s,
                        self.px_w, self.px_h)


@dataclass
class RasterField:
    """Per-pixel orbit results over a grid, stored as parallel arrays of
    shape (px_h, px_w) indexed [j, i]."""

    grid: GridSpec
    status: np.ndarray
    escape_iter: np.ndarray
    last_magnitude: np.ndarray

    def __post_init__(self):
        shape = (self.grid.px_h, self.grid.px_w)
        for name in ("status", "escape_iter", "last_magnitude"):
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")

    @classmethod
    def filled(cls, grid: GridSpec, status: int = OrbitStatus.ESCAPED) -> "RasterField":
        shape = (grid.px_h, grid.px_w)
        return cls(
            grid=grid,
            status=np.full(shape, status, dtype=np.uint8),
            escape_iter=np.zeros(shape, dtype=np.int32),
            last_magnitude=np.zeros(shape, dtype=np.float64),
        )

    def bounded_mask(self) -> np.ndarray:
        return self.status == OrbitStatus.BOUNDED

    def invalid_mask(self) -> np.ndarray:
        return self.status == OrbitStatus.INVALID

    def bounded_count(self) -> int:
        return int(self.bounded_mask().sum())

    def cell(self, i: int, j: int) -> OrbitResult:
        """Orbit result at pixel (i, j) (column i, row j)."""
        if not (0 <= i < self.grid.px_w and 0 <= j < self.grid.px_h):
            raise IndexError(f"pixel ({i}, {j}) out of range")
        s = OrbitStatus(int(self.status[j, i]))
        if s == OrbitStatus.ESCAPED:
            return OrbitResult.escaped(int(self.escape_iter[j, i]),
                                       float(self.last_magnitude[j, i]))
        if s == OrbitStatus.INVALID:
            return OrbitResult.invalid()
        return OrbitResult.bounded(float(self.last_magnitude[j, i]))
