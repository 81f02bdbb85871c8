"""Pipeline configuration: every tunable with its default, loadable from a
JSON file (`WANDERKIT_CONFIG` names a default file); CLI flags override
file values.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import DataFormatError

ENV_VAR = "WANDERKIT_CONFIG"


@dataclass
class Config:
    # trajectory evaluation
    max_eval_images: int = 500
    max_pairs: int | None = None  # pairwise-metric subsampling cap; None = all pairs
    # keyframing
    keyframe_dist: float = 0.5  # m
    keyframe_angle: float = 15.0  # deg
    # mesh extraction
    voxel_size: float = 0.10  # m
    min_points_per_voxel: int = 2
    iso: float = 0.5
    smooth_occupancy: bool = False
    crop_radius: float = 30.0  # m
    height_cut: float = 3.0  # m above lowest camera
    min_faces: int = 50
    # gaussian init
    target_count: int = 5_000_000
    knn_k: int = 3
    scale_multiplier: float = 1.0
    max_opacity: float = 0.99
    splat_radius: int = 1  # px
    # navmesh
    max_slope: float = 35.0  # deg
    min_region_faces: int = 20
    snap_cap: float = 2.0  # m
    agent_offset: float = 0.2  # m
    # endpoint sampling
    vicinity: float = 2.0  # m
    min_geodesic: float = 5.0  # m
    sample_attempts: int = 1000
    # episodes
    max_steps: int = 1000
    success_radius: float = 1.0  # m
    stuck_window: int = 50
    stuck_displacement: float = 0.05  # m
    v_max: float = 1.5  # m/s
    w_max: float = 1.5  # rad/s
    dt: float = 0.1  # s
    # reward
    r_succ: float = 10.0
    r_fail: float = 5.0
    alpha: float = 0.01
    beta: float = 1.0
    gamma: float = 0.99

    def validate(self) -> None:
        positive = (
            "max_eval_images keyframe_dist keyframe_angle voxel_size min_points_per_voxel "
            "target_count knn_k scale_multiplier crop_radius height_cut max_slope "
            "min_region_faces snap_cap vicinity sample_attempts max_steps success_radius "
            "stuck_window stuck_displacement v_max w_max dt r_succ r_fail alpha beta gamma"
        ).split()
        for name in positive:
            if getattr(self, name) <= 0:
                raise DataFormatError(f"config field {name} must be positive")
        if not 0.0 < self.iso < 1.0:
            raise DataFormatError("config field iso must be in (0, 1)")
        if not 0.0 < self.max_slope < 90.0:
            raise DataFormatError("config field max_slope must be in (0, 90)")
        if not 0.0 < self.gamma <= 1.0:
            raise DataFormatError("config field gamma must be in (0, 1]")
        if self.min_faces < 0 or self.splat_radius < 0 or self.agent_offset < 0:
            raise DataFormatError("min_faces, splat_radius, agent_offset must be >= 0")
        if self.max_pairs is not None and self.max_pairs < 1:
            raise DataFormatError("max_pairs must be >= 1 or null")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_file(path) -> "Config":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON: {exc}") from exc
        known = {f.name for f in dataclasses.fields(Config)}
        unknown = set(doc) - known
        if unknown:
            raise DataFormatError(f"{path}: unknown config fields: {sorted(unknown)}")
        cfg = Config(**doc)
        cfg.validate()
        return cfg

    @staticmethod
    def load(path=None) -> "Config":
        """Explicit path, else $WANDERKIT_CONFIG, else defaults."""
        if path is not None:
            return Config.from_file(path)
        env = os.environ.get(ENV_VAR)
        if env:
            return Config.from_file(env)
        return Config()
