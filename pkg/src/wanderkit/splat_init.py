"""Gaussian-splat initialization from metric point clouds and depth-target
rendering.

One isotropic Gaussian per (downsampled) point: scale from a k-nearest-
neighbor heuristic, opacity inversely proportional to volume so that
large Gaussians and sparse floaters do not dominate, and per-view depth
maps produced by direct z-buffered projection of the centers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geometry import Pose
from .meshing import PointCloud

DEFAULT_TARGET_COUNT = 5_000_000
DEFAULT_KNN_K = 3
DEFAULT_SCALE_MULTIPLIER = 1.0
DEFAULT_MAX_OPACITY = 0.99
DEFAULT_SPLAT_RADIUS = 1  # px
NEAR_PLANE = 0.01  # m
DEPTH_SENTINEL = -1.0  # no-data marker in DepthMap arrays


@dataclass(frozen=True)
class GaussianSet:
    """Isotropic Gaussians: centers (m), scales (m), opacities, RGB in [0,1]."""

    centers: np.ndarray
    scales: np.ndarray
    opacities: np.ndarray
    colors: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float).reshape(-1, 3)
        s = np.asarray(self.scales, dtype=float).reshape(-1)
        o = np.asarray(self.opacities, dtype=float).reshape(-1)
        rgb = np.asarray(self.colors, dtype=float).reshape(-1, 3)
        if not (len(c) == len(s) == len(o) == len(rgb)):
            raise ValueError("all per-Gaussian arrays must have equal length")
        if len(s) and s.min() <= 0:
            raise ValueError("scales must be positive")
        if len(o) and (o.min() <= 0 or o.max() > 0.99):
            raise ValueError("opacities must lie in (0, 0.99]")
        if len(rgb) and (rgb.min() < 0 or rgb.max() > 1):
            raise ValueError("colors must lie in [0, 1]")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "opacities", o)
        object.__setattr__(self, "colors", rgb)

    def __len__(self) -> int:
        return len(self.centers)


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole camera: focal lengths and principal point in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point outside the image")

    @staticmethod
    def from_fov(fov_deg: float, width: int, height: int) -> "CameraIntrinsics":
        f = width / (2.0 * math.tan(math.radians(fov_deg) / 2.0))
        return CameraIntrinsics(f, f, width / 2.0, height / 2.0, width, height)


@dataclass(frozen=True)
class DepthMap:
    """Per-pixel depth in meters; DEPTH_SENTINEL marks pixels with no data."""

    depth: np.ndarray  # float32, (height, width)
    sentinel: float = DEPTH_SENTINEL

    def __post_init__(self):
        d = np.asarray(self.depth, dtype=np.float32)
        if d.ndim != 2:
            raise ValueError("depth must be a 2-d array")
        valid = d != np.float32(self.sentinel)
        if valid.any() and (not np.all(np.isfinite(d[valid])) or d[valid].min() <= 0):
            raise ValueError("finite depths must be positive")
        object.__setattr__(self, "depth", d)

    @property
    def width(self) -> int:
        return self.depth.shape[1]

    @property
    def height(self) -> int:
        return self.depth.shape[0]

    def valid_mask(self) -> np.ndarray:
        return self.depth != np.float32(self.sentinel)


def downsample_cloud(cloud: PointCloud, target_count: int, seed: int) -> PointCloud:
    """Uniform random subsample without replacement, deterministic per seed.
    Clouds already within budget are returned unchanged."""
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    if len(cloud) <= target_count:
        return cloud
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(cloud), size=target_count, replace=False))
    cols = cloud.colors[idx] if cloud.colors is not None else None
    return PointCloud(cloud.points[idx], cols)


def knn_scales(
    cloud: PointCloud,
    k: int = DEFAULT_KNN_K,
    scale_multiplier: float = DEFAULT_SCALE_MULTIPLIER,
) -> np.ndarray:
    """scale_i = multiplier * mean distance to the k nearest neighbors.

    Exact (k-d tree) neighbor search; approximate search would break
    determinism guarantees.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(cloud) <= k:
        raise ValueError(f"need more than k={k} points, got {len(cloud)}")
    tree = cKDTree(cloud.points)
    # k+1 because each point is its own nearest neighbor at distance 0.
    dists, _ = tree.query(cloud.points, k=k + 1)
    return scale_multiplier * dists[:, 1:].mean(axis=1)


def opacity_from_density(scales: np.ndarray, max_opacity: float = DEFAULT_MAX_OPACITY) -> np.ndarray:
    """opacity_i = min(max, max * (s_med / s_i)^3).

    Median-density points get max_opacity; Gaussians larger than the
    median get opacity reduced by the cube of the scale ratio (inverse
    volume). Invariant under uniform rescaling of all scales.
    """
    s = np.asarray(scales, dtype=float)
    if len(s) == 0 or s.min() <= 0:
        raise ValueError("scales must be positive")
    if not 0.0 < max_opacity < 1.0:
        raise ValueError("max_opacity must be in (0, 1)")
    s_med = np.median(s)
    return np.minimum(max_opacity, max_opacity * (s_med / s) ** 3)


def init_gaussians(
    cloud: PointCloud,
    target_count: int = DEFAULT_TARGET_COUNT,
    seed: int = 0,
    k: int = DEFAULT_KNN_K,
    scale_multiplier: float = DEFAULT_SCALE_MULTIPLIER,
    max_opacity: float = DEFAULT_MAX_OPACITY,
) -> GaussianSet:
    """Full initialization: downsample, KNN scales, inverse-volume opacity."""
    sub = downsample_cloud(cloud, target_count, seed)
    scales = knn_scales(sub, k, scale_multiplier)
    opac = opacity_from_density(scales, max_opacity)
    if sub.colors is not None:
        colors = np.asarray(sub.colors, dtype=float) / 255.0
    else:
        colors = np.full((len(sub), 3), 0.5)
    return GaussianSet(sub.points, scales, opac, colors)


def render_depth(
    gaussians: GaussianSet,
    pose: Pose,
    intrinsics: CameraIntrinsics,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
) -> DepthMap:
    """Z-buffered pinhole projection of Gaussian centers.

    `pose` is camera-to-world; centers behind the near plane are culled.
    Each projected center stamps a disc of splat_radius pixels; the
    minimum depth wins per pixel.
    """
    if splat_radius < 0:
        raise ValueError("splat_radius must be >= 0")
    h, w = intrinsics.height, intrinsics.width
    buf = np.full((h, w), np.inf, dtype=np.float64)
    if len(gaussians):
        # world -> camera
        pc = (gaussians.centers - pose.translation) @ pose.rotation
        front = pc[:, 2] > NEAR_PLANE
        pc = pc[front]
        if len(pc):
            z = pc[:, 2]
            u = np.round(intrinsics.fx * pc[:, 0] / z + intrinsics.cx).astype(int)
            v = np.round(intrinsics.fy * pc[:, 1] / z + intrinsics.cy).astype(int)
            r = splat_radius
            offsets = [
                (du, dv)
                for du in range(-r, r + 1)
                for dv in range(-r, r + 1)
                if du * du + dv * dv <= r * r
            ]
            for du, dv in offsets:
                uu, vv = u + du, v + dv
                ok = (uu >= 0) & (uu < w) & (vv >= 0) & (vv < h)
                np.minimum.at(buf, (vv[ok], uu[ok]), z[ok])
    out = np.where(np.isinf(buf), DEPTH_SENTINEL, buf).astype(np.float32)
    return DepthMap(out)
