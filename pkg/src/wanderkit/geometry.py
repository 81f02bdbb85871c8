"""SE(3)/SIM(3) pose algebra, trajectory containers, closed-form alignment,
and keyframe selection.

Rotations are stored as 3x3 orthonormal matrices throughout. All functions
are pure: they never mutate their inputs.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError

_ORTHO_TOL = 1e-9
# Slack when comparing accumulated motion against a keyframe threshold:
# reaching the threshold counts as having moved.
_THRESH_EPS = 1e-9


def _check_rotation(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got {R.shape}")
    if not np.allclose(R.T @ R, np.eye(3), atol=1e-6):
        raise ValueError("rotation is not orthonormal")
    if np.linalg.det(R) < 0:
        raise ValueError("rotation has negative determinant (reflection)")
    return R


def rotation_angle_deg(R: np.ndarray) -> float:
    """Rotation angle of R in degrees.

    The acos argument is clamped to [-1, 1]: the trace of a product of
    near-orthonormal matrices can drift past 3 by a few ulps.
    """
    c = (np.trace(R) - 1.0) / 2.0
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def rotation_about_z(angle_rad: float) -> np.ndarray:
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def quat_to_matrix(qx: float, qy: float, qz: float, qw: float) -> np.ndarray:
    """Unit quaternion (x, y, z, w) to rotation matrix."""
    n = math.sqrt(qx * qx + qy * qy + qz * qz + qw * qw)
    if n == 0.0:
        raise ValueError("zero quaternion")
    x, y, z, w = qx / n, qy / n, qz / n, qw / n
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def matrix_to_quat(R: np.ndarray) -> tuple[float, float, float, float]:
    """Rotation matrix to unit quaternion (x, y, z, w), w >= 0."""
    t = np.trace(R)
    if t > 0:
        s = math.sqrt(t + 1.0) * 2.0
        w = 0.25 * s
        x = (R[2, 1] - R[1, 2]) / s
        y = (R[0, 2] - R[2, 0]) / s
        z = (R[1, 0] - R[0, 1]) / s
    else:
        i = int(np.argmax(np.diag(R)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = math.sqrt(max(1.0 + R[i, i] - R[j, j] - R[k, k], 0.0)) * 2.0
        q = [0.0, 0.0, 0.0]
        q[i] = 0.25 * s
        q[j] = (R[j, i] + R[i, j]) / s
        q[k] = (R[k, i] + R[i, k]) / s
        w = (R[k, j] - R[j, k]) / s
        x, y, z = q
    if w < 0:
        x, y, z, w = -x, -y, -z, -w
    n = math.sqrt(x * x + y * y + z * z + w * w)
    return x / n, y / n, z / n, w / n


@dataclass(frozen=True)
class Pose:
    """Rigid camera/agent pose: rotation matrix + translation in meters.

    `quat` optionally carries the source quaternion (x, y, z, w) a pose
    was parsed from, so serialization can round-trip bit-exactly instead
    of re-deriving a quaternion from the matrix.
    """

    rotation: np.ndarray
    translation: np.ndarray
    timestamp: float | None = None
    quat: tuple[float, float, float, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rotation", _check_rotation(self.rotation))
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.all(np.isfinite(t)):
            raise ValueError("non-finite translation")
        object.__setattr__(self, "translation", t)


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered pose sequence in a single world frame."""

    poses: tuple[Pose, ...]
    frame_id: str = "world"

    def __post_init__(self):
        object.__setattr__(self, "poses", tuple(self.poses))
        ts = [p.timestamp for p in self.poses if p.timestamp is not None]
        if len(ts) == len(self.poses) and len(ts) > 1:
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.poses)

    def __getitem__(self, i) -> Pose:
        return self.poses[i]

    @property
    def translations(self) -> np.ndarray:
        return np.array([p.translation for p in self.poses]).reshape(-1, 3)

    @property
    def rotations(self) -> np.ndarray:
        return np.array([p.rotation for p in self.poses]).reshape(-1, 3, 3)


@dataclass(frozen=True)
class Similarity3:
    """Similarity transform p -> scale * rotation @ p + translation.

    SE(3) is the scale == 1 special case. `degenerate` flags a
    rank-deficient estimation (near-collinear input) whose rotation is a
    least-squares choice rather than uniquely determined.
    """

    scale: float
    rotation: np.ndarray
    translation: np.ndarray
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "rotation", _check_rotation(self.rotation))
        t = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "Similarity3":
        return Similarity3(1.0, np.eye(3), np.zeros(3))

    def inverse(self) -> "Similarity3":
        Rt = self.rotation.T
        return Similarity3(1.0 / self.scale, Rt, -Rt @ self.translation / self.scale)

    def transform_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return self.scale * pts @ self.rotation.T + self.translation


def _umeyama(src: np.ndarray, dst: np.ndarray, with_scale: bool) -> Similarity3:
    """Closed-form least-squares similarity from src points to dst points.

    SVD of the 3x3 cross-covariance with determinant-sign correction
    (the reflection-safe standard form).
    """
    n = src.shape[0]
    mu_s = src.mean(axis=0)
    mu_d = dst.mean(axis=0)
    xs = src - mu_s
    xd = dst - mu_d
    var_s = (xs**2).sum() / n
    if var_s < 1e-24:
        raise DegenerateGeometryError("all source translations are identical")
    cov = xd.T @ xs / n
    U, D, Vt = np.linalg.svd(cov)
    S = np.eye(3)
    if np.linalg.det(U) * np.linalg.det(Vt) < 0:
        S[2, 2] = -1.0
    R = U @ S @ Vt
    degenerate = bool(D[1] < 1e-12 * max(D[0], 1e-300))
    if degenerate:
        warnings.warn(
            "alignment covariance is rank deficient (near-collinear points); "
            "rotation is a least-squares choice",
            RuntimeWarning,
        )
    scale = float((D * np.diag(S)).sum() / var_s) if with_scale else 1.0
    if with_scale and scale <= 0:
        raise DegenerateGeometryError("estimated non-positive scale")
    t = mu_d - scale * R @ mu_s
    return Similarity3(scale, R, t, degenerate=degenerate)


def _check_pair(pred: Trajectory, gt: Trajectory):
    if len(pred) != len(gt):
        raise ValueError(f"trajectory length mismatch: {len(pred)} vs {len(gt)}")
    if len(pred) < 2:
        raise ValueError("need at least 2 poses to align")


def align_se3(pred: Trajectory, gt: Trajectory) -> Similarity3:
    """Rigid transform minimizing sum ||R t_pred + t - t_gt||^2 (scale fixed to 1)."""
    _check_pair(pred, gt)
    return _umeyama(pred.translations, gt.translations, with_scale=False)


def align_sim3(pred: Trajectory, gt: Trajectory) -> Similarity3:
    """Similarity transform minimizing sum ||s R t_pred + t - t_gt||^2."""
    _check_pair(pred, gt)
    return _umeyama(pred.translations, gt.translations, with_scale=True)


def apply_alignment(xform: Similarity3, traj: Trajectory) -> Trajectory:
    """Map every pose: t' = s R t + t_align, R' = R_align R. Timestamps kept."""
    poses = [
        Pose(
            rotation=xform.rotation @ p.rotation,
            translation=xform.scale * xform.rotation @ p.translation + xform.translation,
            timestamp=p.timestamp,
        )
        for p in traj.poses
    ]
    return Trajectory(tuple(poses), frame_id=traj.frame_id)


def select_keyframes(traj: Trajectory, dist_thresh: float, angle_thresh: float) -> Trajectory:
    """Greedy keyframe pass: keep a pose once the agent has moved at least
    `dist_thresh` meters or rotated at least `angle_thresh` degrees since
    the last kept pose. The first pose is always kept.
    """
    if dist_thresh <= 0 or angle_thresh <= 0:
        raise ValueError("thresholds must be positive")
    if len(traj) == 0:
        return traj
    kept = [traj[0]]
    for p in traj.poses[1:]:
        last = kept[-1]
        dist = float(np.linalg.norm(p.translation - last.translation))
        angle = rotation_angle_deg(last.rotation.T @ p.rotation)
        if dist >= dist_thresh - _THRESH_EPS or angle >= angle_thresh - _THRESH_EPS:
            kept.append(p)
    return Trajectory(tuple(kept), frame_id=traj.frame_id)


def subsample_uniform(traj: Trajectory, max_count: int) -> Trajectory:
    """Evenly-strided subsequence with stride ceil(N / max_count).

    The first pose is always included; output length never exceeds
    max_count. A trajectory already within budget is returned unchanged.
    """
    if max_count < 1:
        raise ValueError("max_count must be >= 1")
    n = len(traj)
    if n <= max_count:
        return traj
    stride = -(-n // max_count)
    return Trajectory(traj.poses[::stride], frame_id=traj.frame_id)
