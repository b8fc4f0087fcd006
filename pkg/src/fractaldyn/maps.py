"""Catalogue of invertible complex maps with closed-form inverses.

Every multivalued operation takes its principal branch: log has imaginary
part in (-pi, pi], w**(1/n) = exp(log(w)/n), and arccos/arcsin are the
numpy principal branches. Poles and branch points are excluded with a
1e-9 neighborhood; scalar evaluation raises DomainError there, array
evaluation returns NaN entries, and callers render those pixels Invalid.

Forward / inverse pairs:

    identity            z                     w
    affine              a*z + b               (w - b) / a
    arccos_reciprocal   arccos(1/z - 1)       1 / (1 + cos w)
    arcsin_root5        arcsin(z)**(1/5)      sin(w**5)
    reciprocal_sqrt     (1/z - 1)**(1/2)      1 / (w**2 + 1)
    quadratic_param     z**2 + (a*c + b)      principal sqrt(w - (a*c + b))
    flow                A_t z                 inverse of A_t

quadratic_param is not globally one-to-one; its principal-sqrt inverse
makes inverse(forward(z)) = z hold on the right half-plane only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .core import DomainError, GridSpec, require_finite
from .flows import FlowSpec, flow_apply, flow_inverse

POLE_EXCLUSION = 1e-9

BRANCH_PRINCIPAL = "principal"


class InsufficientSamples(RuntimeError):
    """Too few valid point pairs to estimate stretch bounds."""


class MapSpec:
    """Base for the registered map kinds."""

    kind: str = ""
    branch: str = BRANCH_PRINCIPAL

    def _forward_array(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse_array(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def iterated(self, k: int) -> "MapSpec":
        """The k-fold composition of this map with itself, where it has a
        closed form in the registry."""
        raise NotImplementedError(f"{self.kind} has no closed-form iterate")

    def to_config(self) -> dict:
        raise NotImplementedError


def _scalar(fn, z: complex, what: str, kind: str) -> complex:
    z = require_finite(z, "z")
    out = fn(np.asarray([z], dtype=np.complex128))
    w = complex(out[0])
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"{kind} {what} undefined at {z}")
    return w


def eval_forward(m: MapSpec, z):
    """f(z). Scalars raise DomainError outside the domain; ndarrays mark
    those entries NaN."""
    if isinstance(z, np.ndarray):
        return m._forward_array(np.asarray(z, dtype=np.complex128))
    return _scalar(m._forward_array, z, "forward", m.kind)


def eval_inverse(m: MapSpec, w):
    """f^{-1}(w), with the same scalar/array conventions as eval_forward."""
    if isinstance(w, np.ndarray):
        return m._inverse_array(np.asarray(w, dtype=np.complex128))
    return _scalar(m._inverse_array, w, "inverse", m.kind)


def _principal_root(w: np.ndarray, n: int) -> np.ndarray:
    zero = w == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(np.log(np.where(zero, 1.0, w)) / n)
    out[zero] = 0.0
    return out


@dataclass(frozen=True)
class Identity(MapSpec):
    kind: str = field(default="identity", init=False, repr=False)

    def _forward_array(self, z):
        return z

    def _inverse_array(self, w):
        return w

    def iterated(self, k):
        return self

    def to_config(self):
        return {"kind": "identity"}


@dataclass(frozen=True)
class Affine(MapSpec):
    a: complex = 1.0 + 0j
    b: complex = 0j
    kind: str = field(default="affine", init=False, repr=False)

    def __post_init__(self):
        require_finite(self.a, "a")
        require_finite(self.b, "b")
        if self.a == 0:
            raise ValueError("affine scale a must be nonzero")

    def _forward_array(self, z):
        return self.a * z + self.b

    def _inverse_array(self, w):
        return (w - self.b) / self.a

    def iterated(self, k):
        if k < 0:
            raise ValueError("k must be >= 0")
        if k == 0:
            return Identity()
        a, b = complex(self.a), complex(self.b)
        ak = a ** k
        bk = b * sum(a ** j for j in range(k))
        return Affine(ak, bk)

    def to_config(self):
        return {"kind": "affine", "a": [self.a.real, self.a.imag],
                "b": [self.b.real, self.b.imag]}


@dataclass(frozen=True)
class ArccosReciprocal(MapSpec):
    """arccos(1/z - 1); pole at z = 0, inverse pole where cos w = -1."""

    kind: str = field(default="arccos_reciprocal", init=False, repr=False)

    def _forward_array(self, z):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.arccos(1.0 / z - 1.0)
        return np.where(np.abs(z) <= POLE_EXCLUSION, np.nan + 0j, out)

    def _inverse_array(self, w):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            den = 1.0 + np.cos(w)
            out = 1.0 / den
        return np.where(np.abs(den) <= POLE_EXCLUSION, np.nan + 0j, out)

    def to_config(self):
        return {"kind": "arccos_reciprocal"}


@dataclass(frozen=True)
class ArcsinRoot5(MapSpec):
    """(arcsin z)^(1/5) with the principal fifth root."""

    kind: str = field(default="arcsin_root5", init=False, repr=False)

    def _forward_array(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            return _principal_root(np.arcsin(z), 5)

    def _inverse_array(self, w):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sin(w ** 5)

    def to_config(self):
        return {"kind": "arcsin_root5"}


@dataclass(frozen=True)
class ReciprocalSqrt(MapSpec):
    """(1/z - 1)^(1/2); pole at z = 0, inverse pole where w^2 = -1."""

    kind: str = field(default="reciprocal_sqrt", init=False, repr=False)

    def _forward_array(self, z):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.sqrt(1.0 / z - 1.0)
        return np.where(np.abs(z) <= POLE_EXCLUSION, np.nan + 0j, out)

    def _inverse_array(self, w):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            den = w * w + 1.0
            out = 1.0 / den
        return np.where(np.abs(den) <= POLE_EXCLUSION, np.nan + 0j, out)

    def to_config(self):
        return {"kind": "reciprocal_sqrt"}


@dataclass(frozen=True)
class QuadraticParam(MapSpec):
    """z^2 + (a*c + b) with real coefficient a; inverse takes the principal
    square root, so round trips hold on the right half-plane."""

    a: float = 0.6
    b: complex = 0j
    c: complex = 0j
    kind: str = field(default="quadratic_param", init=False, repr=False)

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise ValueError("a must be finite")
        require_finite(self.b, "b")
        require_finite(self.c, "c")

    @property
    def shift(self) -> complex:
        return self.a * self.c + self.b

    def _forward_array(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            return z * z + self.shift

    def _inverse_array(self, w):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sqrt(w - self.shift)

    def to_config(self):
        return {"kind": "quadratic_param", "a": self.a,
                "b": [self.b.real, self.b.imag],
                "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class FlowMap(MapSpec):
    """A flow's time-t solution map used as a fractal mapping function."""

    flow: FlowSpec = None
    t: float = 0.0
    kind: str = field(default="flow", init=False, repr=False)

    def __post_init__(self):
        if self.flow is None:
            raise ValueError("flow is required")
        if not math.isfinite(self.t):
            raise ValueError("t must be finite")

    def _forward_array(self, z):
        return flow_apply(self.flow, z, self.t)

    def _inverse_array(self, w):
        return flow_inverse(self.flow, w, self.t)

    def to_config(self):
        return {"kind": "flow", "flow": self.flow.to_config(), "t": self.t}


MAP_KINDS = {
    "identity": Identity,
    "affine": Affine,
    "arccos_reciprocal": ArccosReciprocal,
    "arcsin_root5": ArcsinRoot5,
    "reciprocal_sqrt": ReciprocalSqrt,
    "quadratic_param": QuadraticParam,
    "flow": FlowMap,
}


def estimate_bilipschitz(m: MapSpec, region: GridSpec, n_pairs: int,
                         min_separation: float = 1e-12) -> tuple[float, float]:
    """Empirical stretch bounds (l1, l2) of f over a window.

    Draws n_pairs quasi-random (Halton) pairs (u, v) in the window, discards pairs where
    either endpoint leaves f's domain or |u - v| <= min_separation, and
    returns the min and max of |f(u) - f(v)| / |u - v|. Fewer than 10
    surviving pairs raises InsufficientSamples.
    """
    if n_pairs < 100:
        raise ValueError("n_pairs must be >= 100")
    sampler = qmc.Halton(d=4, scramble=False)
    pts = sampler.random(n_pairs)
    re0 = region.center.real - region.width / 2
    im0 = region.center.imag - region.height / 2
    u = (re0 + pts[:, 0] * region.width) + 1j * (im0 + pts[:, 1] * region.height)
    v = (re0 + pts[:, 2] * region.width) + 1j * (im0 + pts[:, 3] * region.height)

    fu = eval_forward(m, u)
    fv = eval_forward(m, v)
    sep = np.abs(u - v)
    with np.errstate(invalid="ignore"):
        good = np.isfinite(fu) & np.isfinite(fv) & (sep > min_separation)
    if int(good.sum()) < 10:
        raise InsufficientSamples(
            f"only {int(good.sum())} valid pairs of {n_pairs} for {m.kind}")
    ratios = np.abs(fu[good] - fv[good]) / sep[good]
    return float(ratios.min()), float(ratios.max())
