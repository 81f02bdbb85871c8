"""Camera-pose accuracy metrics: absolute and relative translation /
rotation errors, AUC@30, and dataset-level aggregation.

Conventions:
  * Absolute translation errors are computed after closed-form alignment
    (rigid for the raw variant, similarity for the scaled one).
  * Rotation and translation-direction metrics apply the similarity
    alignment rotation to predictions first, so a correct reconstruction
    expressed in a rotated world frame scores zero.
  * Pairwise relative metrics run over all N(N-1)/2 unordered pairs.
"""
from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass, asdict

import numpy as np

from .errors import UndefinedMetricError
from .geometry import Trajectory, align_se3, align_sim3

# Relative translations shorter than this have no usable direction.
DEGENERATE_PAIR_NORM = 1e-9

AUC_MAX_DEG = 30.0
SUCCESS_AUC_THRESHOLD = 0.1

METRIC_FIELDS = (
    "t_ate_raw",
    "t_ate_scaled",
    "r_ate",
    "t_rte",
    "t_rte_deg",
    "r_rte",
    "auc_at_30",
)


@dataclass(frozen=True)
class PoseMetricReport:
    """Per-scene pose accuracy. Lengths in meters, angles in degrees."""

    t_ate_raw: float
    t_ate_scaled: float
    r_ate: float
    t_rte: float
    t_rte_deg: float
    r_rte: float
    auc_at_30: float
    n_poses: int
    degenerate_pairs_skipped: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


@dataclass(frozen=True)
class DatasetSummary:
    """Mean/median of each metric across scenes plus the success rate."""

    mean: dict[str, float]
    median: dict[str, float]
    success_rate: float
    n_scenes: int
    n_evaluated: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "success_rate": self.success_rate,
            "n_scenes": self.n_scenes,
            "n_evaluated": self.n_evaluated,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _pair_indices(n: int, max_pairs: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(n, k=1)
    if max_pairs is not None and i.size > max_pairs:
        sel = np.linspace(0, i.size - 1, max_pairs).round().astype(int)
        i, j = i[sel], j[sel]
    return i, j


def _angles_deg_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Per-row angle in degrees between 3-vectors (rows assumed non-zero).

    atan2 of (cross norm, dot): well-conditioned near 0 and 180 degrees,
    where the acos form loses half the significant digits.
    """
    dot = (u * v).sum(axis=1)
    cross = np.linalg.norm(np.cross(u, v), axis=1)
    return np.degrees(np.arctan2(cross, dot))


def _rotation_angles_deg(Ra: np.ndarray, Rb: np.ndarray) -> np.ndarray:
    """Angle of Ra[k]^T Rb[k] for stacked rotation matrices.

    Uses atan2(|skew part|, trace form) which stays accurate for near-zero
    and near-pi rotations.
    """
    M = np.einsum("kji,kjl->kil", Ra, Rb)
    cos = (np.einsum("kii->k", M) - 1.0) / 2.0
    sin = 0.5 * np.sqrt(
        (M[:, 2, 1] - M[:, 1, 2]) ** 2
        + (M[:, 0, 2] - M[:, 2, 0]) ** 2
        + (M[:, 1, 0] - M[:, 0, 1]) ** 2
    )
    return np.degrees(np.arctan2(sin, cos))


def t_ate_raw(pred: Trajectory, gt: Trajectory) -> float:
    """RMSE of translations after rigid (scale = 1) alignment."""
    xf = align_se3(pred, gt)
    res = xf.transform_points(pred.translations) - gt.translations
    return float(np.sqrt((res**2).sum(axis=1).mean()))


def t_ate_scaled(pred: Trajectory, gt: Trajectory) -> float:
    """RMSE of translations after similarity (free scale) alignment."""
    xf = align_sim3(pred, gt)
    res = xf.transform_points(pred.translations) - gt.translations
    return float(np.sqrt((res**2).sum(axis=1).mean()))


def r_ate(pred: Trajectory, gt: Trajectory) -> float:
    """RMSE of per-pose rotation angles, gauge-fixed by the similarity
    alignment rotation left-composed onto predicted rotations."""
    R_align = align_sim3(pred, gt).rotation
    Rp = np.einsum("ij,kjl->kil", R_align, pred.rotations)
    ang = _rotation_angles_deg(gt.rotations, Rp)
    return float(np.sqrt((ang**2).mean()))


def t_rte(pred: Trajectory, gt: Trajectory, max_pairs: int | None = None) -> float:
    """RMSE over camera pairs of the difference in pairwise translation
    distances. Uses raw predicted translations: pairwise distances are
    rigid-invariant but scale-sensitive by design."""
    _check(pred, gt)
    i, j = _pair_indices(len(pred), max_pairs)
    tp, tg = pred.translations, gt.translations
    dp = np.linalg.norm(tp[i] - tp[j], axis=1)
    dg = np.linalg.norm(tg[i] - tg[j], axis=1)
    return float(np.sqrt(((dp - dg) ** 2).mean()))


def t_rte_deg(pred: Trajectory, gt: Trajectory, max_pairs: int | None = None) -> float:
    """RMSE over camera pairs of the angle between relative translation
    directions, after rotating predictions into the gt gauge. Pairs where
    either relative translation is shorter than DEGENERATE_PAIR_NORM are
    skipped."""
    _check(pred, gt)
    R_align = align_sim3(pred, gt).rotation
    i, j = _pair_indices(len(pred), max_pairs)
    dp = (pred.translations[i] - pred.translations[j]) @ R_align.T
    dg = gt.translations[i] - gt.translations[j]
    ok = (np.linalg.norm(dp, axis=1) >= DEGENERATE_PAIR_NORM) & (
        np.linalg.norm(dg, axis=1) >= DEGENERATE_PAIR_NORM
    )
    if not ok.any():
        raise UndefinedMetricError("every camera pair has degenerate relative translation")
    ang = _angles_deg_between(dp[ok], dg[ok])
    return float(np.sqrt((ang**2).mean()))


def r_rte(pred: Trajectory, gt: Trajectory, max_pairs: int | None = None) -> float:
    """RMSE over camera pairs of relative rotation angles. Relative
    rotations are taken in the frame of pose i (R_i^T R_j), so a global
    gauge rotation cancels exactly and no alignment is needed."""
    _check(pred, gt)
    i, j = _pair_indices(len(pred), max_pairs)
    Rp, Rg = pred.rotations, gt.rotations
    rel_p = np.einsum("kji,kjl->kil", Rp[i], Rp[j])
    rel_g = np.einsum("kji,kjl->kil", Rg[i], Rg[j])
    ang = _rotation_angles_deg(rel_g, rel_p)
    return float(np.sqrt((ang**2).mean()))


def auc_from_errors(errors_deg: np.ndarray, max_deg: float = AUC_MAX_DEG) -> float:
    """Exact area under the piecewise-constant CDF of the error multiset,
    integrated over [0, max_deg] and normalized to [0, 1].

    Equals mean over errors of (1 - min(e, max) / max).
    """
    e = np.asarray(errors_deg, dtype=float)
    if e.size == 0:
        raise UndefinedMetricError("empty error set")
    return float((1.0 - np.minimum(e, max_deg) / max_deg).mean())


def auc_at_30(pred: Trajectory, gt: Trajectory, max_pairs: int | None = None) -> float:
    """Normalized AUC of the CDF of per-pair max(rotation error,
    translation-direction error), capped at 30 degrees. Pairs with a
    degenerate relative translation contribute only their rotation error."""
    _check(pred, gt)
    R_align = align_sim3(pred, gt).rotation
    i, j = _pair_indices(len(pred), max_pairs)
    Rp, Rg = pred.rotations, gt.rotations
    rel_p = np.einsum("kji,kjl->kil", Rp[i], Rp[j])
    rel_g = np.einsum("kji,kjl->kil", Rg[i], Rg[j])
    rot_err = _rotation_angles_deg(rel_g, rel_p)

    dp = (pred.translations[i] - pred.translations[j]) @ R_align.T
    dg = gt.translations[i] - gt.translations[j]
    ok = (np.linalg.norm(dp, axis=1) >= DEGENERATE_PAIR_NORM) & (
        np.linalg.norm(dg, axis=1) >= DEGENERATE_PAIR_NORM
    )
    err = rot_err.copy()
    if ok.any():
        err[ok] = np.maximum(rot_err[ok], _angles_deg_between(dp[ok], dg[ok]))
    return auc_from_errors(err)


def _check(pred: Trajectory, gt: Trajectory):
    if len(pred) != len(gt):
        raise ValueError(f"trajectory length mismatch: {len(pred)} vs {len(gt)}")
    if len(pred) < 2:
        raise ValueError("need at least 2 poses")


def count_degenerate_pairs(pred: Trajectory, gt: Trajectory) -> int:
    i, j = _pair_indices(len(pred))
    dp = pred.translations[i] - pred.translations[j]
    dg = gt.translations[i] - gt.translations[j]
    bad = (np.linalg.norm(dp, axis=1) < DEGENERATE_PAIR_NORM) | (
        np.linalg.norm(dg, axis=1) < DEGENERATE_PAIR_NORM
    )
    return int(bad.sum())


def evaluate_scene(pred: Trajectory, gt: Trajectory, max_pairs: int | None = None) -> PoseMetricReport:
    """All pose metrics for one index-corresponding trajectory pair."""
    _check(pred, gt)
    return PoseMetricReport(
        t_ate_raw=t_ate_raw(pred, gt),
        t_ate_scaled=t_ate_scaled(pred, gt),
        r_ate=r_ate(pred, gt),
        t_rte=t_rte(pred, gt, max_pairs),
        t_rte_deg=t_rte_deg(pred, gt, max_pairs),
        r_rte=r_rte(pred, gt, max_pairs),
        auc_at_30=auc_at_30(pred, gt, max_pairs),
        n_poses=len(pred),
        degenerate_pairs_skipped=count_degenerate_pairs(pred, gt),
    )


def scene_success(auc: float) -> bool:
    """A scene counts as successfully reconstructed iff AUC@30 exceeds 0.1
    strictly."""
    return auc > SUCCESS_AUC_THRESHOLD


def aggregate(reports: list[PoseMetricReport | None]) -> DatasetSummary:
    """Dataset-level mean/median per metric plus the success rate.

    A None entry marks a scene whose reconstruction produced no poses:
    it is excluded from error statistics but counts as a non-success.
    """
    if not reports:
        raise ValueError("no reports to aggregate")
    usable = [r for r in reports if r is not None]
    mean, median = {}, {}
    for name in METRIC_FIELDS:
        vals = [getattr(r, name) for r in usable]
        if vals:
            mean[name] = statistics.fmean(vals)
            median[name] = statistics.median(vals)
        else:
            mean[name] = math.nan
            median[name] = math.nan
    successes = sum(1 for r in usable if scene_success(r.auc_at_30))
    return DatasetSummary(
        mean=mean,
        median=median,
        success_rate=successes / len(reports),
        n_scenes=len(reports),
        n_evaluated=len(usable),
    )


def write_reports_csv(path, reports: dict[str, PoseMetricReport | None]) -> None:
    """One row per scene; failed scenes emit empty metric cells."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["scene_id", *METRIC_FIELDS, "n_poses", "degenerate_pairs_skipped", "success"])
        for scene_id, r in reports.items():
            if r is None:
                w.writerow([scene_id] + [""] * (len(METRIC_FIELDS) + 2) + [False])
            else:
                w.writerow(
                    [scene_id]
                    + [getattr(r, m) for m in METRIC_FIELDS]
                    + [r.n_poses, r.degenerate_pairs_skipped, scene_success(r.auc_at_30)]
                )
