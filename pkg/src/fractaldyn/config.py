"""Scene configuration: strict JSON parsing, overrides, serialization.

Configs are JSON objects with one ``command`` plus the sections that
command needs. Complex numbers are two-element arrays [re, im]. Parsing
is strict: unknown keys anywhere, missing required keys, and
out-of-range values are all rejected, with the offending line quoted
when it can be located in the source text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import GridSpec
from .fji import IterParams
from .flows import FlowSpec, Linear, LimitCycle, NumericRK4, PeriodicForced
from .maps import (MAP_KINDS, Affine, ArccosReciprocal, ArcsinRoot5, FlowMap,
                   Identity, MapSpec, QuadraticParam, ReciprocalSqrt)

COMMANDS = ("julia", "mandelbrot", "fmi-julia", "fmi-mandelbrot",
            "discrete-traj", "flow-traj", "dimension", "verify-fmt", "zeno")

PALETTE_NAMES = ("grayscale", "classic", "mono")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _line_of(text: str, key: str) -> int | None:
    """First line containing the quoted key, for error messages."""
    needle = f'"{key}"'
    for num, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return num
    return None


def _err(text: str, key: str, message: str):
    raise ConfigError(message, _line_of(text, key))


class _Ctx:
    """Carries the source text through validation for line lookups."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, key: str, message: str):
        _err(self.text, key, message)

    def obj(self, raw, key: str) -> dict:
        if not isinstance(raw, dict):
            self.fail(key, f"{key!r} must be an object")
        return raw

    def check_keys(self, raw: dict, allowed: set[str], where: str):
        for k in raw:
            if k not in allowed:
                self.fail(k, f"unknown key {k!r} in {where}")

    def require(self, raw: dict, key: str, where: str):
        if key not in raw:
            self.fail(where, f"missing required key {key!r} for {where}")
        return raw[key]

    def number(self, raw, key: str) -> float:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self.fail(key, f"{key!r} must be a number")
        if not math.isfinite(raw):
            self.fail(key, f"{key!r} must be finite")
        return float(raw)

    def integer(self, raw, key: str) -> int:
        if isinstance(raw, bool) or not isinstance(raw, int):
            self.fail(key, f"{key!r} must be an integer")
        return raw

    def complex_pair(self, raw, key: str) -> complex:
        if (not isinstance(raw, list) or len(raw) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in raw)):
            self.fail(key, f"{key!r} must be a two-element [re, im] array")
        z = complex(raw[0], raw[1])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            self.fail(key, f"{key!r} must be finite")
        return z


@dataclass(frozen=True)
class SceneConfig:
    command: str
    output: str
    grid: GridSpec | None = None
    dst_grid: GridSpec | None = None
    c: complex | None = None
    map: MapSpec | None = None
    flow: FlowSpec | None = None
    t_list: tuple[float, ...] | None = None
    k_max: int | None = None
    iter_params: IterParams = field(default_factory=IterParams)
    palette: str = "classic"
    supersample: int | None = None
    boundary: bool | None = None
    min_box: int | None = None
    max_box: int | None = None
    d0: float | None = None
    t1: float | None = None
    n: int | None = None
    i0: int | None = None
    px_w: int | None = None
    px_h: int | None = None

    def to_dict(self) -> dict:
        """Fully resolved config (defaults applied) as a JSON-ready dict."""
        doc: dict = {"command": self.command, "output": self.output,
                     "palette": self.palette}
        if self.grid is not None:
            doc["grid"] = _grid_dict(self.grid)
        if self.dst_grid is not None:
            doc["dst_grid"] = _grid_dict(self.dst_grid)
        if self.c is not None:
            doc["c"] = [self.c.real, self.c.imag]
        if self.map is not None:
            doc["map"] = self.map.to_config()
        if self.flow is not None:
            doc["flow"] = self.flow.to_config()
        if self.t_list is not None:
            doc["t_list"] = list(self.t_list)
        if self.k_max is not None:
            doc["k_max"] = self.k_max
        if self.command != "zeno":
            doc["iter"] = {"max_iter": self.iter_params.max_iter,
                           "escape_radius": self.iter_params.escape_radius}
        for key in ("supersample", "boundary", "min_box", "max_box",
                    "d0", "t1", "n", "i0", "px_w", "px_h"):
            val = getattr(self, key)
            if val is not None:
                doc[key] = val
        return doc


def _grid_dict(grid: GridSpec) -> dict:
    return {"center": [grid.center.real, grid.center.imag],
            "width": grid.width, "height": grid.height,
            "px_w": grid.px_w, "px_h": grid.px_h}


def _parse_grid(ctx: _Ctx, raw, where: str) -> GridSpec:
    raw = ctx.obj(raw, where)
    ctx.check_keys(raw, {"center", "width", "height", "px_w", "px_h"}, where)
    center = ctx.complex_pair(ctx.require(raw, "center", where), "center")
    width = ctx.number(ctx.require(raw, "width", where), "width")
    height = ctx.number(ctx.require(raw, "height", where), "height")
    px_w = ctx.integer(ctx.require(raw, "px_w", where), "px_w")
    px_h = ctx.integer(ctx.require(raw, "px_h", where), "px_h")
    if width <= 0 or height <= 0:
        ctx.fail("width", f"{where} width/height must be positive")
    if px_w < 1 or px_h < 1:
        ctx.fail("px_w", f"{where} pixel counts must be >= 1")
    return GridSpec(center, width, height, px_w, px_h)


def _parse_iter(ctx: _Ctx, raw) -> IterParams:
    raw = ctx.obj(raw, "iter")
    ctx.check_keys(raw, {"max_iter", "escape_radius"}, "iter")
    max_iter = ctx.integer(raw.get("max_iter", 500), "max_iter")
    radius = ctx.number(raw.get("escape_radius", 2.0), "escape_radius")
    if max_iter < 1:
        ctx.fail("max_iter", "max_iter must be >= 1")
    if radius <= 0:
        ctx.fail("escape_radius", "escape_radius must be positive")
    return IterParams(max_iter, radius)


def _parse_flow(ctx: _Ctx, raw, where: str = "flow") -> FlowSpec:
    raw = ctx.obj(raw, where)
    kind = ctx.require(raw, "kind", where)
    if kind == "linear":
        ctx.check_keys(raw, {"kind", "lambda"}, where)
        lam = ctx.complex_pair(ctx.require(raw, "lambda", where), "lambda")
        return Linear(lam)
    if kind == "limit_cycle":
        ctx.check_keys(raw, {"kind"}, where)
        return LimitCycle()
    if kind == "periodic_forced":
        ctx.check_keys(raw, {"kind", "a"}, where)
        return PeriodicForced(ctx.number(ctx.require(raw, "a", where), "a"))
    if kind == "numeric_rk4":
        ctx.check_keys(raw, {"kind", "base", "dt"}, where)
        base = _parse_flow(ctx, ctx.require(raw, "base", where), "base")
        if isinstance(base, NumericRK4):
            ctx.fail("base", "numeric_rk4 base must be a closed-form flow")
        dt = ctx.number(raw.get("dt", 1e-3), "dt")
        if dt <= 0:
            ctx.fail("dt", "dt must be positive")
        return NumericRK4(base, dt)
    ctx.fail("kind", f"unknown flow kind {kind!r}")


def _parse_map(ctx: _Ctx, raw) -> MapSpec:
    raw = ctx.obj(raw, "map")
    kind = ctx.require(raw, "kind", "map")
    if kind not in MAP_KINDS:
        ctx.fail("kind", f"unknown map kind {kind!r}")
    if kind == "identity":
        ctx.check_keys(raw, {"kind"}, "map")
        return Identity()
    if kind == "affine":
        ctx.check_keys(raw, {"kind", "a", "b"}, "map")
        a = ctx.complex_pair(ctx.require(raw, "a", "map"), "a")
        b = ctx.complex_pair(raw.get("b", [0.0, 0.0]), "b")
        if a == 0:
            ctx.fail("a", "affine a must be nonzero")
        return Affine(a, b)
    if kind == "arccos_reciprocal":
        ctx.check_keys(raw, {"kind"}, "map")
        return ArccosReciprocal()
    if kind == "arcsin_root5":
        ctx.check_keys(raw, {"kind"}, "map")
        return ArcsinRoot5()
    if kind == "reciprocal_sqrt":
        ctx.check_keys(raw, {"kind"}, "map")
        return ReciprocalSqrt()
    if kind == "quadratic_param":
        ctx.check_keys(raw, {"kind", "a", "b", "c"}, "map")
        a = ctx.number(ctx.require(raw, "a", "map"), "a")
        b = ctx.complex_pair(ctx.require(raw, "b", "map"), "b")
        c = ctx.complex_pair(ctx.require(raw, "c", "map"), "c")
        return QuadraticParam(a, b, c)
    # kind == "flow"
    ctx.check_keys(raw, {"kind", "flow", "t"}, "map")
    flow = _parse_flow(ctx, ctx.require(raw, "flow", "map"))
    t = ctx.number(ctx.require(raw, "t", "map"), "t")
    return FlowMap(flow, t)


# Per-command field tables: name -> required? (others allowed but optional)
_FIELDS: dict[str, dict[str, bool]] = {
    "julia": {"grid": True, "c": True, "iter": False},
    "mandelbrot": {"grid": True, "iter": False},
    "fmi-julia": {"grid": True, "c": True, "map": True, "iter": False},
    "fmi-mandelbrot": {"grid": True, "map": True, "iter": False},
    "discrete-traj": {"grid": True, "c": True, "map": True, "k_max": True,
                      "iter": False, "supersample": False},
    "flow-traj": {"grid": True, "c": True, "flow": True, "t_list": True,
                  "iter": False},
    "dimension": {"grid": True, "c": True, "iter": False, "boundary": False,
                  "min_box": False, "max_box": False},
    "verify-fmt": {"grid": True, "c": True, "map": True, "dst_grid": False,
                   "iter": False, "supersample": False},
    "zeno": {"d0": True, "t1": True, "n": True, "i0": False,
             "px_w": False, "px_h": False, "min_box": False, "max_box": False},
}


def validate_config(raw: dict, text: str = "") -> SceneConfig:
    """Validate a parsed JSON object into a SceneConfig."""
    ctx = _Ctx(text)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    command = ctx.require(raw, "command", "config")
    if command not in COMMANDS:
        ctx.fail("command", f"unknown command {command!r}")
    fields = _FIELDS[command]
    allowed = set(fields) | {"command", "output", "palette"}
    ctx.check_keys(raw, allowed, f"command {command!r}")
    for name, required in fields.items():
        if required and name not in raw:
            ctx.fail("command", f"missing required key {name!r} for command {command!r}")

    output = ctx.require(raw, "output", f"command {command!r}")
    if not isinstance(output, str) or not output:
        ctx.fail("output", "output must be a non-empty string")
    palette = raw.get("palette", "classic")
    if palette not in PALETTE_NAMES:
        ctx.fail("palette", f"palette must be one of {PALETTE_NAMES}")

    kw: dict = {"command": command, "output": output, "palette": palette}
    if "grid" in raw:
        kw["grid"] = _parse_grid(ctx, raw["grid"], "grid")
    if "dst_grid" in raw:
        kw["dst_grid"] = _parse_grid(ctx, raw["dst_grid"], "dst_grid")
    if "c" in raw:
        kw["c"] = ctx.complex_pair(raw["c"], "c")
    if "map" in raw:
        kw["map"] = _parse_map(ctx, raw["map"])
    if "flow" in raw:
        kw["flow"] = _parse_flow(ctx, raw["flow"])
    if "iter" in raw:
        kw["iter_params"] = _parse_iter(ctx, raw["iter"])
    if "t_list" in raw:
        tl = raw["t_list"]
        if not isinstance(tl, list) or not tl:
            ctx.fail("t_list", "t_list must be a non-empty array of numbers")
        kw["t_list"] = tuple(ctx.number(t, "t_list") for t in tl)
    if "k_max" in raw:
        k = ctx.integer(raw["k_max"], "k_max")
        if k < 0:
            ctx.fail("k_max", "k_max must be >= 0")
        kw["k_max"] = k
    if "supersample" in raw:
        s = ctx.integer(raw["supersample"], "supersample")
        if s < 1:
            ctx.fail("supersample", "supersample must be >= 1")
        kw["supersample"] = s
    elif command in ("discrete-traj", "verify-fmt"):
        kw["supersample"] = 3
    if "boundary" in raw:
        if not isinstance(raw["boundary"], bool):
            ctx.fail("boundary", "boundary must be a boolean")
        kw["boundary"] = raw["boundary"]
    elif command == "dimension":
        kw["boundary"] = True
    for name in ("min_box", "max_box"):
        if name in raw:
            v = ctx.integer(raw[name], name)
            if v < 2:
                ctx.fail(name, f"{name} must be >= 2")
            kw[name] = v
    for name, check in (("d0", lambda v: v > 0), ("t1", lambda v: v > 0)):
        if name in raw:
            v = ctx.number(raw[name], name)
            if not check(v):
                ctx.fail(name, f"{name} must be positive")
            kw[name] = v
    if "n" in raw:
        v = ctx.integer(raw["n"], "n")
        if v < 1:
            ctx.fail("n", "n must be >= 1")
        kw["n"] = v
    if "i0" in raw:
        v = ctx.integer(raw["i0"], "i0")
        if v < 0:
            ctx.fail("i0", "i0 must be >= 0")
        kw["i0"] = v
    elif command == "zeno":
        kw["i0"] = 0
    for name in ("px_w", "px_h"):
        if name in raw:
            v = ctx.integer(raw[name], name)
            if v < 1:
                ctx.fail(name, f"{name} must be >= 1")
            kw[name] = v
    if command == "zeno":
        kw.setdefault("px_w", 1024)
        kw.setdefault("px_h", 512)
    return SceneConfig(**kw)


def parse_config(text) -> SceneConfig:
    """Parse and validate a config document (bytes or str)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"syntax error: {exc.msg}", exc.lineno) from None
    return validate_config(raw, text)


def serialize_config(cfg: SceneConfig) -> str:
    """Canonical JSON for a SceneConfig; parse_config inverts this."""
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply key=value overrides to a parsed config dict.

    Keys are dotted paths (``iter.max_iter``, ``c.0``); integer segments
    index arrays. Values are parsed as JSON scalars, falling back to
    strings.
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must be key=value")
        path, _, val_text = item.partition("=")
        try:
            value = json.loads(val_text)
        except json.JSONDecodeError:
            value = val_text
        segments = path.split(".")
        node = raw
        for idx, seg in enumerate(segments):
            last = idx == len(segments) - 1
            if isinstance(node, list):
                try:
                    pos = int(seg)
                except ValueError:
                    raise ConfigError(f"override {path!r}: {seg!r} is not an index") from None
                if not (0 <= pos < len(node)):
                    raise ConfigError(f"override {path!r}: index {pos} out of range")
                if last:
                    node[pos] = value
                else:
                    node = node[pos]
            elif isinstance(node, dict):
                if last:
                    node[seg] = value
                else:
                    if seg not in node:
                        node[seg] = {}
                    node = node[seg]
            else:
                raise ConfigError(f"override {path!r}: {seg!r} does not address a field")
    return raw
