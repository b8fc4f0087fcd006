"""Command-line entry point: run one scene config, write images and a
metadata sidecar.

    fractaldyn run --config scene.json [--override key=value ...] [--threads N]

Exit codes: 0 success, 1 config error, 2 runtime error. Single-image
commands write <output>.ppm; multi-frame commands write numbered frames
plus <output>_manifest.json. Every run writes <output>.json with the
resolved config and run statistics.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis
from .config import ConfigError, SceneConfig, apply_overrides, validate_config
from .fji import extract_boundary, render_julia, render_mandelbrot
from .flows import trajectory_sweep
from .fmi import FmiMode, FmiScene, discrete_trajectory, fmi_julia, fmi_mandelbrot, forward_image
from .imaging import get_palette, write_image, write_metadata
from .maps import Affine, Identity


def _out_path(cfg: SceneConfig, suffix: str) -> Path:
    path = Path(cfg.output + suffix)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write_frames(cfg: SceneConfig, frames, labels, label_key: str):
    """Write numbered frames plus a manifest; returns manifest entries."""
    palette = get_palette(cfg.palette)
    entries = []
    for idx, (field, label) in enumerate(zip(frames, labels)):
        path = _out_path(cfg, f"_{idx:03d}.ppm")
        write_image(field, palette, path)
        entries.append({"file": path.name, label_key: label,
                        "bounded_count": field.bounded_count()})
    manifest = _out_path(cfg, "_manifest.json")
    with open(manifest, "w", encoding="utf-8") as fh:
        json.dump({"frames": entries}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return entries


def _run_julia(cfg: SceneConfig, threads: int) -> dict:
    field = render_julia(cfg.grid, cfg.c, cfg.iter_params, threads)
    write_image(field, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
    return {"bounded_count": field.bounded_count()}

def _run_mandelbrot(cfg: SceneConfig, threads: int) -> dict:
    field = render_mandelbrot(cfg.grid, cfg.iter_params, threads)
    write_image(field, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
    return {"bounded_count": field.bounded_count()}

def _run_fmi_julia(cfg: SceneConfig, threads: int) -> dict:
    scene = FmiScene(cfg.grid, cfg.c, cfg.map, cfg.iter_params, FmiMode.JULIA)
    field = fmi_julia(scene, threads)
    write_image(field, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
    return {"bounded_count": field.bounded_count(),
            "invalid_count": int(field.invalid_mask().sum())}

def _run_fmi_mandelbrot(cfg: SceneConfig, threads: int) -> dict:
    scene = FmiScene(cfg.grid, 0j, cfg.map, cfg.iter_params, FmiMode.MANDELBROT)
    field = fmi_mandelbrot(scene, threads)
    write_image(field, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
    return {"bounded_count": field.bounded_count(),
            "invalid_count": int(field.invalid_mask().sum())}

def _run_discrete_traj(cfg: SceneConfig, threads: int) -> dict:
    traj = discrete_trajectory(cfg.c, cfg.map, cfg.k_max, cfg.grid,
                               cfg.iter_params, cfg.supersample, threads)
    ks = list(range(cfg.k_max + 1))
    palette = get_palette(cfg.palette)
    entries = []
    for k, pull, push in zip(ks, traj.pullback, traj.pushforward):
        p_pull = _out_path(cfg, f"_k{k:03d}.ppm")
        p_push = _out_path(cfg, f"_push_k{k:03d}.ppm")
        write_image(pull, palette, p_pull)
        write_image(push, palette, p_push)
        entries.append({"k": k, "pullback": p_pull.name, "pushforward": p_push.name,
                        "bounded_count": pull.bounded_count()})
    manifest = _out_path(cfg, "_manifest.json")
    with open(manifest, "w", encoding="utf-8") as fh:
        json.dump({"frames": entries}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"frames": len(entries),
            "bounded_counts": [e["bounded_count"] for e in entries]}

def _run_flow_traj(cfg: SceneConfig, threads: int) -> dict:
    frames = trajectory_sweep(cfg.grid, cfg.c, cfg.flow, cfg.t_list,
                              cfg.iter_params, threads)
    entries = _write_frames(cfg, frames, list(cfg.t_list), "t")
    return {"frames": len(entries),
            "bounded_counts": [e["bounded_count"] for e in entries]}

def _run_dimension(cfg: SceneConfig, threads: int) -> dict:
    field = render_julia(cfg.grid, cfg.c, cfg.iter_params, threads)
    mask = extract_boundary(field) if cfg.boundary else field
    min_box = cfg.min_box if cfg.min_box is not None else 2
    max_box = cfg.max_box if cfg.max_box is not None else min(cfg.grid.px_w, cfg.grid.px_h) // 4
    est = analysis.box_counting_dimension(mask, min_box, max_box)
    write_image(mask, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
    return {"bounded_count": mask.bounded_count(),
            "dimension": {"slope": est.slope, "r_squared": est.r_squared,
                          "scales_used": list(est.scales_used),
                          "counts": list(est.counts)}}

def _run_verify_fmt(cfg: SceneConfig, threads: int) -> dict:
    dst_grid = cfg.dst_grid
    if dst_grid is None:
        if isinstance(cfg.map, Identity):
            dst_grid = cfg.grid
        elif isinstance(cfg.map, Affine):
            dst_grid = cfg.grid.affine_image(cfg.map.a, cfg.map.b)
        else:
            raise ConfigError("dst_grid is required for non-affine maps")
    src = render_julia(cfg.grid, cfg.c, cfg.iter_params, threads)
    fwd = forward_image(src, cfg.map, dst_grid, cfg.supersample)
    scene = FmiScene(dst_grid, cfg.c, cfg.map, cfg.iter_params, FmiMode.JULIA)
    fmi = fmi_julia(scene, threads)
    cmp = analysis.compare_masks(fwd, fmi)
    palette = get_palette(cfg.palette)
    write_image(fwd, palette, _out_path(cfg, "_forward.ppm"))
    write_image(fmi, palette, _out_path(cfg, "_fmi.ppm"))
    return {"bounded_count_forward": fwd.bounded_count(),
            "bounded_count_fmi": fmi.bounded_count(),
            "comparison": {"jaccard": cmp.jaccard, "hausdorff_px": cmp.hausdorff_px}}

def _run_zeno(cfg: SceneConfig, threads: int) -> dict:
    diagram = analysis.zeno_states(cfg.d0, cfg.t1, cfg.n, cfg.i0)
    stats: dict = {"times": list(diagram.times), "heights": list(diagram.heights)}
    field = analysis.rasterize_zeno(diagram, cfg.px_w, cfg.px_h) if cfg.n >= 2 else None
    if field is not None:
        write_image(field, get_palette(cfg.palette), _out_path(cfg, ".ppm"))
        stats["bounded_count"] = field.bounded_count()
        min_box = cfg.min_box if cfg.min_box is not None else 2
        max_box = cfg.max_box if cfg.max_box is not None else min(cfg.px_w, cfg.px_h) // 4
        est = analysis.box_counting_dimension(field, min_box, max_box)
        stats["dimension"] = {"slope": est.slope, "r_squared": est.r_squared,
                              "scales_used": list(est.scales_used),
                              "counts": list(est.counts)}
    return stats


_RUNNERS = {
    "julia": _run_julia,
    "mandelbrot": _run_mandelbrot,
    "fmi-julia": _run_fmi_julia,
    "fmi-mandelbrot": _run_fmi_mandelbrot,
    "discrete-traj": _run_discrete_traj,
    "flow-traj": _run_flow_traj,
    "dimension": _run_dimension,
    "verify-fmt": _run_verify_fmt,
    "zeno": _run_zeno,
}


def run_scene(cfg: SceneConfig, threads: int = 1) -> dict:
    """Execute a validated scene; returns the stats written to the sidecar."""
    t0 = time.perf_counter()
    stats = _RUNNERS[cfg.command](cfg, threads)
    stats["wall_time_s"] = time.perf_counter() - t0
    write_metadata(cfg.to_dict(), stats, _out_path(cfg, ".json"))
    return stats


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fractaldyn",
        description="Render escape-time fractals, their images under "
                    "invertible maps and flows, and verification metrics.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    run = sub.add_parser("run", help="run one scene config")
    run.add_argument("--config", required=True, help="path to a scene JSON file")
    run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                     help="override a scalar config field (dotted path)")
    run.add_argument("--threads", type=int, default=1,
                     help="cap on render worker threads")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text(encoding="utf-8")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"syntax error: {exc.msg}", exc.lineno) from None
        raw = apply_overrides(raw, args.override)
        cfg = validate_config(raw, text)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        threads = max(1, args.threads)
        run_scene(cfg, threads)
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
