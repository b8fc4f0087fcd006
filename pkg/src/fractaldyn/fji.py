"""Escape-time orbit classification for z -> z^2 + c.

A seed is Bounded when its orbit magnitude never exceeds the escape
radius within the iteration budget, Escaped(n) when |z_n| first exceeds
it at index n (the seed itself counts as index 0). With radius >= 2 and
|c| <= 2 escape is permanent, so the escape index is well defined.
Magnitudes are compared squared to avoid overflow in the final hypot;
arithmetic overflow to a non-finite value reads as an escape at that
index.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import GridSpec, OrbitResult, OrbitStatus, RasterField, require_finite

DEFAULT_MAX_ITER = 500
DEFAULT_ESCAPE_RADIUS = 2.0


@dataclass(frozen=True)
class IterParams:
    max_iter: int = DEFAULT_MAX_ITER
    escape_radius: float = DEFAULT_ESCAPE_RADIUS

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (self.escape_radius > 0 and math.isfinite(self.escape_radius)):
            raise ValueError("escape_radius must be positive and finite")


def classify_orbit(z0: complex, c: complex, params: IterParams = IterParams()) -> OrbitResult:
    """Classify one seed by direct iteration (scalar reference path)."""
    z = require_finite(z0, "z0")
    c = require_finite(c, "c")
    r2 = params.escape_radius * params.escape_radius
    for n in range(params.max_iter):
        m2 = z.real * z.real + z.imag * z.imag
        if m2 > r2 or not math.isfinite(m2):
            return OrbitResult.escaped(n, math.sqrt(m2) if m2 == m2 else math.inf)
        z = z * z + c
    m2 = z.real * z.real + z.imag * z.imag
    return OrbitResult.bounded(math.sqrt(m2) if m2 == m2 else math.inf)


def _classify_block(z0, c, params: IterParams):
    """Vectorized orbit classification over flat arrays.

    z0 and c may be scalars or equal-length arrays. Non-finite seeds or
    parameters mark the cell Invalid. Returns (status, iters, mags).
    """
    z0 = np.atleast_1d(np.asarray(z0, dtype=np.complex128))
    c = np.asarray(c, dtype=np.complex128)
    z0, c = np.broadcast_arrays(z0, c)
    n_cells = z0.size
    z0 = z0.reshape(-1)
    c = c.reshape(-1)

    status = np.full(n_cells, OrbitStatus.BOUNDED, dtype=np.uint8)
    iters = np.zeros(n_cells, dtype=np.int32)
    mags = np.zeros(n_cells, dtype=np.float64)

    invalid = ~(np.isfinite(z0) & np.isfinite(c))
    status[invalid] = OrbitStatus.INVALID

    active = np.flatnonzero(~invalid)
    z = z0[active]
    cc = c[active]
    r2 = params.escape_radius * params.escape_radius

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(params.max_iter):
            m2 = z.real * z.real + z.imag * z.imag
            esc = (m2 > r2) | ~np.isfinite(m2)
            if esc.any():
                hit = active[esc]
                status[hit] = OrbitStatus.ESCAPED
                iters[hit] = n
                ms = np.sqrt(m2[esc])
                mags[hit] = np.where(np.isnan(ms), np.inf, ms)
                keep = ~esc
                active = active[keep]
                z = z[keep]
                cc = cc[keep]
                if active.size == 0:
                    break
            z = z * z + cc
        if active.size:
            m2 = z.real * z.real + z.imag * z.imag
            mags[active] = np.sqrt(m2)
    return status, iters, mags


def classify_grid(z0, c, params: IterParams, threads: int = 1):
    """Classify a (px_h, px_w) block of seeds, optionally in row bands
    across a thread pool. Band results are written to disjoint slices, so
    the output is identical for any thread count."""
    z0 = np.asarray(z0, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    z0b, cb = np.broadcast_arrays(z0, c)
    shape = z0b.shape
    if threads <= 1 or z0b.ndim < 2 or shape[0] < 2 * threads:
        status, iters, mags = _classify_block(z0b.reshape(-1), cb.reshape(-1), params)
        return status.reshape(shape), iters.reshape(shape), mags.reshape(shape)

    status = np.empty(shape, dtype=np.uint8)
    iters = np.empty(shape, dtype=np.int32)
    mags = np.empty(shape, dtype=np.float64)
    bounds = np.linspace(0, shape[0], threads + 1, dtype=int)

    def run(lo, hi):
        s, it, mg = _classify_block(z0b[lo:hi].reshape(-1), cb[lo:hi].reshape(-1), params)
        band = (hi - lo,) + shape[1:]
        status[lo:hi] = s.reshape(band)
        iters[lo:hi] = it.reshape(band)
        mags[lo:hi] = mg.reshape(band)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda b: run(*b), zip(bounds[:-1], bounds[1:])))
    return status, iters, mags


def render_julia(grid: GridSpec, c: complex, params: IterParams = IterParams(),
                 threads: int = 1) -> RasterField:
    """Filled Julia raster: pixel (i, j) classifies its center as the seed."""
    c = require_finite(c, "c")
    status, iters, mags = classify_grid(grid.points(), c, params, threads)
    return RasterField(grid, status, iters, mags)


def render_mandelbrot(grid: GridSpec, params: IterParams = IterParams(),
                      threads: int = 1) -> RasterField:
    """Mandelbrot raster: pixel (i, j) classifies the orbit of 0 with its
    center as the parameter."""
    status, iters, mags = classify_grid(np.complex128(0), grid.points(), params, threads)
    return RasterField(grid, status, iters, mags)


def extract_boundary(field: RasterField) -> RasterField:
    """Keep Bounded cells that touch a non-Bounded 4-neighbor or the window
    edge; everything else becomes Escaped(0). Invalid cells stay Invalid."""
    bounded = field.bounded_mask()
    padded = np.pad(bounded, 1, constant_values=False)
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1] &
                padded[1:-1, :-2] & padded[1:-1, 2:])
    keep = bounded & ~interior

    status = np.where(keep, np.uint8(OrbitStatus.BOUNDED), np.uint8(OrbitStatus.ESCAPED))
    status[field.invalid_mask()] = OrbitStatus.INVALID
    mags = np.where(keep, field.last_magnitude, 0.0)
    return RasterField(field.grid, status, np.zeros_like(field.escape_iter), mags)
