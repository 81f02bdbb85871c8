"""Command-line entry point exposing the pipeline end to end.

JSON results go to stdout, human-readable logs to stderr. Exit codes:
0 ok, 2 degenerate metrics, 64 usage, 65 data error, 70 internal error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, io
from .config import Config
from .errors import DataFormatError, WanderkitError
from .episode import (
    EpisodeLimits,
    ExternalPolicy,
    RewardConfig,
    evaluate,
    expert_policy,
    random_policy,
    read_episodes_jsonl,
    run_episode,
    write_episodes_jsonl,
)
from .geometry import subsample_uniform
from .image_metrics import psnr, ssim
from .meshing import extract_collision_mesh
from .navmesh import bake_navmesh, sample_endpoints, shortest_path
from .splat_init import CameraIntrinsics, init_gaussians, render_depth
from .trajectory_metrics import (
    aggregate,
    evaluate_scene,
    scene_success,
    write_reports_csv,
)

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _log(msg: str):
    print(msg, file=sys.stderr)


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _json_default(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    raise TypeError(type(v))


def _finite(d: dict) -> dict:
    """Replace +/-inf floats with serializable strings."""
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out[k] = _finite(v)
        elif isinstance(v, float) and math.isinf(v):
            out[k] = "inf" if v > 0 else "-inf"
        else:
            out[k] = v
    return out


def _parse_xyz(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise DataFormatError(f"expected x,y,z, got {text!r}")
    return np.array([float(p) for p in parts])


def build_parser() -> _Parser:
    p = _Parser(prog="wanderkit", description=__doc__)
    p.add_argument("--version", action="version", version=f"wanderkit {__version__}")
    p.add_argument("--config", help="JSON config file (default: $WANDERKIT_CONFIG)")
    p.add_argument("--config-dump", action="store_true", help="print the effective config and exit")
    sub = p.add_subparsers(dest="command")

    sp = sub.add_parser("eval-traj", help="pose metrics for one scene")
    sp.add_argument("--gt", required=True)
    sp.add_argument("--pred", required=True)
    sp.add_argument("--max-images", type=int, default=None)

    sp = sub.add_parser("eval-dataset", help="pose metrics over a manifest directory")
    sp.add_argument("--manifest-dir", required=True)
    sp.add_argument("--csv", help="per-scene CSV output path prefix")
    sp.add_argument("--max-images", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("extract-mesh", help="point cloud -> cropped, filtered collision mesh")
    sp.add_argument("--cloud", required=True)
    sp.add_argument("--traj")
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("bake-navmesh", help="collision mesh -> walkable navmesh")
    sp.add_argument("--mesh", required=True)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("plan", help="shortest path between two points")
    sp.add_argument("--navmesh", required=True)
    sp.add_argument("--start", required=True, help="x,y,z")
    sp.add_argument("--goal", required=True, help="x,y,z")
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("init-gaussians", help="point cloud -> initialized Gaussian set")
    sp.add_argument("--cloud", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("render-depth", help="project Gaussians to depth maps per pose")
    sp.add_argument("--gaussians", required=True)
    sp.add_argument("--traj", required=True)
    sp.add_argument("--intrinsics", required=True, help="JSON with fx,fy,cx,cy,width,height or fov_deg,width,height")
    sp.add_argument("-o", "--output", required=True, help="output directory")

    sp = sub.add_parser("run-episodes", help="closed-loop navigation rollouts")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--policy", required=True, help="builtin:expert | builtin:random | path to executable")
    sp.add_argument("--episodes", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("eval-nav", help="NE/SR/SPL/IR over an episode log")
    sp.add_argument("--episodes", required=True)

    sp = sub.add_parser("eval-nvs", help="PSNR/SSIM over paired image directories")
    sp.add_argument("--pred-dir", required=True)
    sp.add_argument("--gt-dir", required=True)
    return p


def cmd_eval_traj(args, cfg: Config) -> int:
    gt = io.read_tum(args.gt)
    pred = io.read_tum(args.pred)
    cap = args.max_images if args.max_images is not None else cfg.max_eval_images
    gt = subsample_uniform(gt, cap)
    pred = subsample_uniform(pred, cap)
    report = evaluate_scene(pred, gt, max_pairs=cfg.max_pairs)
    _emit(report.to_dict())
    return EXIT_OK if scene_success(report.auc_at_30) else EXIT_DEGENERATE


def _eval_one_scene(task):
    manifest_path, method, cap, max_pairs = task
    m = io.load_manifest(manifest_path)
    gt = io.read_tum(m.gt_trajectory)
    pred_path = m.predicted_trajectories.get(method)
    pred = io.read_tum(pred_path)
    if len(pred) == 0:
        return m.scene_id, None
    n = min(len(gt), cap)
    return m.scene_id, evaluate_scene(
        subsample_uniform(pred, n), subsample_uniform(gt, n), max_pairs=max_pairs
    )


def cmd_eval_dataset(args, cfg: Config) -> int:
    root = Path(args.manifest_dir)
    manifests = sorted(root.glob("*.json"))
    if not manifests:
        raise DataFormatError(f"no manifest JSON files in {root}")
    cap = args.max_images if args.max_images is not None else cfg.max_eval_images
    methods: set[str] = set()
    for mp in manifests:
        methods |= set(io.load_manifest(mp).predicted_trajectories)
    result = {}
    for method in sorted(methods):
        tasks = [
            (str(mp), method, cap, cfg.max_pairs)
            for mp in manifests
            if method in io.load_manifest(mp).predicted_trajectories
        ]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                pairs = list(pool.map(_eval_one_scene, tasks))
        else:
            pairs = [_eval_one_scene(t) for t in tasks]
        pairs.sort(key=lambda kv: kv[0])
        summary = aggregate([r for _, r in pairs])
        result[method] = summary.to_dict()
        if args.csv:
            write_reports_csv(f"{args.csv}.{method}.csv", dict(pairs))
    _emit(result)
    return EXIT_OK


def cmd_extract_mesh(args, cfg: Config) -> int:
    cloud = io.read_ply(args.cloud)
    traj = io.read_tum(args.traj) if args.traj else None
    mesh = extract_collision_mesh(
        cloud,
        traj,
        voxel_size=cfg.voxel_size,
        min_points_per_voxel=cfg.min_points_per_voxel,
        iso=cfg.iso,
        smooth=cfg.smooth_occupancy,
        radius=cfg.crop_radius,
        height_cut=cfg.height_cut,
        min_faces=cfg.min_faces,
    )
    io.write_obj(args.output, mesh)
    _log(f"wrote {mesh.n_faces} faces to {args.output}")
    _emit({"vertices": len(mesh.vertices), "faces": mesh.n_faces, "output": args.output})
    return EXIT_OK


def cmd_bake_navmesh(args, cfg: Config) -> int:
    mesh = io.read_obj(args.mesh)
    nm = bake_navmesh(mesh, max_slope=cfg.max_slope, min_region_faces=cfg.min_region_faces)
    io.save_navmesh(args.output, nm)
    _emit(
        {
            "triangles": nm.n_triangles,
            "regions": int(nm.regions.max()) + 1,
            "output": args.output,
        }
    )
    return EXIT_OK


def cmd_plan(args, cfg: Config) -> int:
    nm = io.load_navmesh(args.navmesh)
    path = shortest_path(
        nm,
        _parse_xyz(args.start),
        _parse_xyz(args.goal),
        agent_offset=cfg.agent_offset,
        snap_cap=cfg.snap_cap,
    )
    io.save_path(args.output, path)
    _emit({"length": path.length, "waypoints": len(path.waypoints), "output": args.output})
    return EXIT_OK


def cmd_init_gaussians(args, cfg: Config) -> int:
    cloud = io.read_ply(args.cloud)
    gs = init_gaussians(
        cloud,
        target_count=cfg.target_count,
        seed=args.seed,
        k=cfg.knn_k,
        scale_multiplier=cfg.scale_multiplier,
        max_opacity=cfg.max_opacity,
    )
    io.write_gaussians_ply(args.output, gs)
    _emit({"gaussians": len(gs), "output": args.output})
    return EXIT_OK


def cmd_render_depth(args, cfg: Config) -> int:
    gs = io.read_gaussians_ply(args.gaussians)
    traj = io.read_tum(args.traj)
    intr_doc = json.loads(Path(args.intrinsics).read_text())
    if "fov_deg" in intr_doc:
        intr = CameraIntrinsics.from_fov(intr_doc["fov_deg"], intr_doc["width"], intr_doc["height"])
    else:
        intr = CameraIntrinsics(**intr_doc)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, pose in enumerate(traj.poses):
        dm = render_depth(gs, pose, intr, splat_radius=cfg.splat_radius)
        io.write_depth(outdir / f"{i:06d}.wdepth", dm)
    _emit({"rendered": len(traj), "output": str(outdir)})
    return EXIT_OK


def cmd_run_episodes(args, cfg: Config) -> int:
    m = io.load_manifest(args.manifest)
    if m.navmesh is None:
        raise DataFormatError("manifest has no navmesh entry")
    if m.gt_trajectory is None:
        raise DataFormatError("manifest has no gt_trajectory entry (needed for endpoint sampling)")
    nm = io.load_navmesh(m.navmesh)
    cameras = io.read_tum(m.gt_trajectory)
    limits = EpisodeLimits(
        max_steps=cfg.max_steps,
        success_radius=cfg.success_radius,
        stuck_window=cfg.stuck_window,
        stuck_displacement=cfg.stuck_displacement,
        v_max=cfg.v_max,
        w_max=cfg.w_max,
        dt=cfg.dt,
        snap_cap=cfg.snap_cap,
    )
    reward_cfg = RewardConfig(cfg.r_succ, cfg.r_fail, cfg.alpha, cfg.beta, cfg.gamma)
    if args.policy.startswith("builtin:") and args.policy not in ("builtin:expert", "builtin:random"):
        raise DataFormatError(f"unknown builtin policy {args.policy!r}")
    external = ExternalPolicy([args.policy]) if not args.policy.startswith("builtin:") else None
    episodes = []
    try:
        for i in range(args.episodes):
            start, goal = sample_endpoints(
                nm,
                cameras,
                vicinity=cfg.vicinity,
                min_geodesic=cfg.min_geodesic,
                seed=args.seed + i,
                max_attempts=cfg.sample_attempts,
                snap_cap=cfg.snap_cap,
            )
            if args.policy == "builtin:expert":
                policy = expert_policy(nm, goal, limits)
            elif args.policy == "builtin:random":
                policy = random_policy(args.seed + i, limits)
            else:
                policy = external
            ep = run_episode(nm, start, goal, policy, limits, reward_cfg)
            episodes.append(ep)
            _log(f"episode {i}: {ep.termination}, length {ep.actual_length:.2f} m")
    finally:
        if external is not None:
            external.close()
    write_episodes_jsonl(args.output, episodes)
    _emit({"episodes": len(episodes), "output": args.output})
    return EXIT_OK


def cmd_eval_nav(args, cfg: Config) -> int:
    episodes = read_episodes_jsonl(args.episodes)
    report = evaluate(episodes)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_eval_nvs(args, cfg: Config) -> int:
    pred_dir, gt_dir = Path(args.pred_dir), Path(args.gt_dir)
    exts = {".png", ".ppm", ".pgm", ".pnm"}
    names = sorted(p.name for p in gt_dir.iterdir() if p.suffix.lower() in exts)
    if not names:
        raise DataFormatError(f"no images in {gt_dir}")
    per_image = {}
    psnrs, ssims = [], []
    for name in names:
        pred_path = pred_dir / name
        if not pred_path.exists():
            raise DataFormatError(f"missing predicted image {pred_path}")
        p = io.read_image(pred_path)
        g = io.read_image(gt_dir / name)
        v_psnr = psnr(p, g)
        v_ssim = ssim(p, g)
        per_image[name] = {"psnr": v_psnr, "ssim": v_ssim}
        psnrs.append(v_psnr)
        ssims.append(v_ssim)
    result = {
        "per_image": per_image,
        "mean_psnr": float(np.mean(psnrs)),
        "mean_ssim": float(np.mean(ssims)),
    }
    _emit(_finite(result))
    return EXIT_OK


_COMMANDS = {
    "eval-traj": cmd_eval_traj,
    "eval-dataset": cmd_eval_dataset,
    "extract-mesh": cmd_extract_mesh,
    "bake-navmesh": cmd_bake_navmesh,
    "plan": cmd_plan,
    "init-gaussians": cmd_init_gaussians,
    "render-depth": cmd_render_depth,
    "run-episodes": cmd_run_episodes,
    "eval-nav": cmd_eval_nav,
    "eval-nvs": cmd_eval_nvs,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.load(args.config)
        cfg.validate()
        if args.config_dump:
            _emit(cfg.to_dict())
            return EXIT_OK
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return _COMMANDS[args.command](args, cfg)
    except (DataFormatError, FileNotFoundError) as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return EXIT_DATA
    except WanderkitError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
