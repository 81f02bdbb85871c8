"""TUM trajectory files: one pose per line,
`timestamp tx ty tz qx qy qz qw`, '#' comments allowed.

Poses are sorted by timestamp on read; quaternions are renormalized with
a warning when off unit norm by more than 1e-6. Writing uses 17
significant digits, so write-then-read round-trips bit-exactly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from ..errors import DataFormatError
from ..geometry import Pose, Trajectory, matrix_to_quat, quat_to_matrix


@dataclass
class TumLoadReport:
    out_of_order: int = 0
    renormalized_quaternions: int = 0
    comment_lines: int = 0


def read_tum_report(path) -> tuple[Trajectory, TumLoadReport]:
    report = TumLoadReport()
    records = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                report.comment_lines += 1
                continue
            fields = line.split()
            if len(fields) != 8:
                raise DataFormatError(f"{path}:{lineno}: expected 8 fields, got {len(fields)}")
            try:
                vals = [float(v) for v in fields]
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
            if not all(math.isfinite(v) for v in vals):
                raise DataFormatError(f"{path}:{lineno}: non-finite value")
            records.append(vals)
    n_unsorted = sum(1 for a, b in zip(records, records[1:]) if b[0] < a[0])
    if n_unsorted:
        report.out_of_order = n_unsorted
        warnings.warn(f"{path}: {n_unsorted} out-of-order timestamps, sorting", RuntimeWarning)
        records.sort(key=lambda r: r[0])
    poses = []
    for ts, tx, ty, tz, qx, qy, qz, qw in records:
        norm = math.sqrt(qx * qx + qy * qy + qz * qz + qw * qw)
        if abs(norm - 1.0) > 1e-6:
            report.renormalized_quaternions += 1
        poses.append(
            Pose(quat_to_matrix(qx, qy, qz, qw), (tx, ty, tz), timestamp=ts, quat=(qx, qy, qz, qw))
        )
    if report.renormalized_quaternions:
        warnings.warn(
            f"{path}: renormalized {report.renormalized_quaternions} quaternions", RuntimeWarning
        )
    return Trajectory(tuple(poses)), report


def read_tum(path) -> Trajectory:
    traj, _ = read_tum_report(path)
    return traj


def write_tum(path, traj: Trajectory) -> None:
    with open(path, "w") as f:
        f.write("# timestamp tx ty tz qx qy qz qw\n")
        for i, p in enumerate(traj.poses):
            ts = p.timestamp if p.timestamp is not None else float(i)
            qx, qy, qz, qw = p.quat if p.quat is not None else matrix_to_quat(p.rotation)
            vals = [ts, *p.translation, qx, qy, qz, qw]
            f.write(" ".join(f"{v:.17g}" for v in vals) + "\n")
