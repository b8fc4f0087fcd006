"""Raster verification metrics: box-counting dimension, mask comparison,
and the runner-and-tortoise line diagrams.

Box counting is the computable stand-in for Hausdorff dimension: cover
the Bounded cells with grid-aligned boxes of dyadic pixel size eps and
fit the slope of log N(eps) against log(1/eps). The slope is exact for
the calibration masks (filled square -> 2, straight line -> 1) and is
preserved under bi-Lipschitz images up to rasterization noise, which is
what the dimension-invariance checks exercise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import GridSpec, OrbitStatus, RasterField


class EmptyMaskError(ValueError):
    """Box counting needs at least one Bounded cell."""


class InsufficientScalesError(ValueError):
    """Fewer than 3 dyadic box sizes fit between the given bounds."""


class MasksUndefinedError(ValueError):
    """Mask comparison is undefined when both masks are empty."""


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    r_squared: float
    scales_used: tuple[int, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class MaskComparison:
    jaccard: float
    hausdorff_px: float


@dataclass(frozen=True)
class ZenoDiagram:
    """Vertical-line diagram of a geometric pursuit: line i has height
    heights[i] at time times[i], each height half the previous one."""

    times: tuple[float, ...]
    heights: tuple[float, ...]
    i0: int


def _box_count(mask: np.ndarray, size: int) -> int:
    h, w = mask.shape
    ph = (size - h % size) % size
    pw = (size - w % size) % size
    if ph or pw:
        mask = np.pad(mask, ((0, ph), (0, pw)), constant_values=False)
    hh, ww = mask.shape
    blocks = mask.reshape(hh // size, size, ww // size, size)
    return int(blocks.any(axis=(1, 3)).sum())


def box_counting_dimension(mask: RasterField, min_box: int, max_box: int) -> DimensionEstimate:
    """Least-squares slope of log N(eps) vs log(1/eps) over dyadic box
    sizes in [min_box, max_box], counted over the Bounded cells."""
    grid = mask.grid
    if not (2 <= min_box < max_box):
        raise ValueError("need 2 <= min_box < max_box")
    if max_box > min(grid.px_w, grid.px_h) // 4:
        raise ValueError("max_box must be <= min(px_w, px_h) / 4")
    bounded = mask.bounded_mask()
    if not bounded.any():
        raise EmptyMaskError("mask has no Bounded cells")

    sizes = []
    s = 1
    while s <= max_box:
        if s >= min_box:
            sizes.append(s)
        s *= 2
    if len(sizes) < 3:
        raise InsufficientScalesError(
            f"only {len(sizes)} dyadic sizes in [{min_box}, {max_box}]")

    counts = [_box_count(bounded, s) for s in sizes]
    x = np.log(1.0 / np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - float((resid ** 2).sum()) / ss_tot
    return DimensionEstimate(float(slope), r2, tuple(sizes), tuple(counts))


def compare_masks(a: RasterField, b: RasterField) -> MaskComparison:
    """Jaccard index and symmetric pixel-set Hausdorff distance between the
    Bounded masks, with cells Invalid in either field excluded from both.

    Distances are Euclidean in pixel-index space. Raises
    MasksUndefinedError when both masks are empty; if exactly one is
    empty, jaccard is 0 and hausdorff_px is infinite.
    """
    if (a.grid.px_w, a.grid.px_h) != (b.grid.px_w, b.grid.px_h):
        raise ValueError("grids must have identical pixel dimensions")
    valid = ~(a.invalid_mask() | b.invalid_mask())
    ma = a.bounded_mask() & valid
    mb = b.bounded_mask() & valid
    na = int(ma.sum())
    nb = int(mb.sum())
    if na == 0 and nb == 0:
        raise MasksUndefinedError("both masks are empty")
    if na == 0 or nb == 0:
        return MaskComparison(0.0, math.inf)

    inter = int((ma & mb).sum())
    union = na + nb - inter
    jaccard = inter / union

    pa = np.argwhere(ma)
    pb = np.argwhere(mb)
    d_ab = cKDTree(pb).query(pa, k=1)[0].max()
    d_ba = cKDTree(pa).query(pb, k=1)[0].max()
    return MaskComparison(float(jaccard), float(max(d_ab, d_ba)))


def zeno_states(d0: float, t1: float, n: int, i0: int = 0) -> ZenoDiagram:
    """Moments and gap heights of the constant-speed pursuit: starting gap
    d0 halves at each observation, t_i = t1*(2 - 2^(1-i)), d_i = d0*2^(-i),
    for i = i0 .. i0+n-1. The times accumulate at 2*t1."""
    if not (d0 > 0 and t1 > 0):
        raise ValueError("d0 and t1 must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    if i0 < 0:
        raise ValueError("i0 must be >= 0")
    idx = range(i0, i0 + n)
    times = tuple(t1 * (2.0 - 2.0 ** (1 - i)) for i in idx)
    heights = tuple(d0 * 2.0 ** (-i) for i in idx)
    return ZenoDiagram(times, heights, i0)


def rasterize_zeno(diagram: ZenoDiagram, px_w: int = 1024, px_h: int = 512,
                   t_max: float | None = None) -> RasterField:
    """Render the diagram's vertical lines, one pixel wide, as a Bounded
    mask: the x-window spans [t_{i0}, accumulation point], the y-window
    [0, first height]."""
    times = diagram.times
    heights = diagram.heights
    if t_max is None:
        if len(times) < 2:
            raise ValueError("need at least 2 lines to infer the window; pass t_max")
        # The accumulation point equals t_i + 2*(t_{i+1} - t_i) for every i.
        t_max = 2.0 * times[1] - times[0]
    t0 = times[0]
    h = heights[0]
    grid = GridSpec(complex((t0 + t_max) / 2, h / 2), t_max - t0, h, px_w, px_h)

    field = RasterField.filled(grid, OrbitStatus.ESCAPED)
    ys = grid.points()[:, 0].imag
    for t, d in zip(times, heights):
        u = (t - grid.center.real) / grid.dx + grid.px_w / 2
        if not (0.0 <= u <= grid.px_w):
            continue
        col = min(int(u), grid.px_w - 1)
        rows = ys <= d
        field.status[rows, col] = OrbitStatus.BOUNDED
    return field
