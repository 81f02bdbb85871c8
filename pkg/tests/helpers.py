"""Shared fixture builders for the test suite."""
from __future__ import annotations

import numpy as np

from wanderkit.geometry import Pose, Trajectory
from wanderkit.meshing import TriangleMesh


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation matrix via a normalized quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    x, y, z, w = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_trajectory(rng: np.random.Generator, n: int, spread: float = 5.0) -> Trajectory:
    poses = tuple(
        Pose(random_rotation(rng), rng.uniform(-spread, spread, 3), timestamp=float(i))
        for i in range(n)
    )
    return Trajectory(poses)


def grid_floor(nx: int = 10, ny: int = 10, size: float = 1.0, z: float = 0.0, holes=()) -> TriangleMesh:
    """Flat triangulated floor of nx x ny unit cells; cells listed in
    `holes` (as (i, j) tuples) are left out, producing walkable gaps."""
    holes = set(holes)
    vs = []
    for i in range(nx + 1):
        for j in range(ny + 1):
            vs.append((i * size, j * size, z))

    def vid(i, j):
        return i * (ny + 1) + j

    tris = []
    for i in range(nx):
        for j in range(ny):
            if (i, j) in holes:
                continue
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return TriangleMesh(np.array(vs, dtype=float), np.array(tris, dtype=np.int64))


# Wall modeled as missing floor cells: x in [2, 9], y in [4, 6]. Going
# from below to above forces a detour around the x=2 side or the x=9 side.
U_HOLES = frozenset((i, j) for i in range(2, 9) for j in range(4, 6))


def u_corridor_mesh() -> TriangleMesh:
    return grid_floor(holes=U_HOLES)


def straight_line_trajectory(n: int, spacing: float = 0.1, height: float = 0.5) -> Trajectory:
    poses = tuple(
        Pose(np.eye(3), np.array([i * spacing, 0.0, height]), timestamp=float(i)) for i in range(n)
    )
    return Trajectory(poses)
