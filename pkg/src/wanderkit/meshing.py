"""Collision-mesh extraction from metric point clouds.

Pipeline: occupancy voxelization -> marching cubes -> trajectory-distance
cropping -> small-fragment removal. The mesh is occupancy-accurate rather
than visually detailed and is not required to be watertight.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import uniform_filter
from scipy.spatial import cKDTree
from skimage import measure

from .geometry import Trajectory

DEFAULT_VOXEL_SIZE = 0.10  # m; resolves curbs/steps at walking scale
DEFAULT_MIN_POINTS_PER_VOXEL = 2  # rejects isolated LiDAR noise
DEFAULT_CROP_RADIUS = 30.0  # m
DEFAULT_HEIGHT_CUT = 3.0  # m above the lowest camera
DEFAULT_MIN_FACES = 50
WELD_TOL = 1e-6  # m, exact-duplicate vertex welding


@dataclass(frozen=True)
class PointCloud:
    """Metric XYZ points with optional uint8 RGB colors."""

    points: np.ndarray
    colors: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite point coordinates")
        object.__setattr__(self, "points", pts)
        if self.colors is not None:
            cols = np.asarray(self.colors).reshape(-1, 3)
            if len(cols) != len(pts):
                raise ValueError("colors length does not match points")
            object.__setattr__(self, "colors", cols)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class OccupancyGrid:
    """Dense boolean voxel grid. Cell (i, j, k) spans
    origin + [i, i+1) * voxel_size on each axis; its center is
    origin + (i + 0.5) * voxel_size."""

    origin: np.ndarray
    voxel_size: float
    occupancy: np.ndarray  # bool, shape == dims

    def __post_init__(self):
        if self.voxel_size <= 0:
            raise ValueError("voxel_size must be positive")
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float).reshape(3))
        occ = np.asarray(self.occupancy)
        if occ.ndim != 3:
            raise ValueError("occupancy must be a 3-d array")
        object.__setattr__(self, "occupancy", occ.astype(bool))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.occupancy.shape

    def world_to_index(self, pts: np.ndarray) -> np.ndarray:
        return np.floor((np.asarray(pts) - self.origin) / self.voxel_size).astype(int)

    def cell_centers(self) -> np.ndarray:
        """Centers of all occupied cells, world coordinates."""
        idx = np.argwhere(self.occupancy)
        return self.origin + (idx + 0.5) * self.voxel_size


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle soup in world coordinates."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        t = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle index out of range")
        if t.size:
            degen = (t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])
            if degen.any():
                t = t[~degen]
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @property
    def n_faces(self) -> int:
        return len(self.triangles)

    def centroids(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    @staticmethod
    def empty() -> "TriangleMesh":
        return TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))


def voxelize(
    cloud: PointCloud,
    voxel_size: float = DEFAULT_VOXEL_SIZE,
    min_points_per_voxel: int = DEFAULT_MIN_POINTS_PER_VOXEL,
) -> OccupancyGrid:
    """Occupancy grid over the cloud AABB padded by one voxel on all sides.

    A cell is occupied iff it contains at least min_points_per_voxel points.
    """
    if voxel_size <= 0:
        raise ValueError("voxel_size must be positive")
    if min_points_per_voxel < 1:
        raise ValueError("min_points_per_voxel must be >= 1")
    if len(cloud) == 0:
        return OccupancyGrid(np.zeros(3), voxel_size, np.zeros((1, 1, 1), dtype=bool))
    lo = cloud.points.min(axis=0) - voxel_size
    hi = cloud.points.max(axis=0) + voxel_size
    dims = np.maximum(np.ceil((hi - lo) / voxel_size).astype(int), 1)
    idx = np.floor((cloud.points - lo) / voxel_size).astype(int)
    idx = np.clip(idx, 0, dims - 1)
    counts = np.zeros(dims, dtype=np.int32)
    np.add.at(counts, (idx[:, 0], idx[:, 1], idx[:, 2]), 1)
    return OccupancyGrid(lo, voxel_size, counts >= min_points_per_voxel)


def marching_cubes(grid: OccupancyGrid, iso: float = 0.5, smooth: bool = False) -> TriangleMesh:
    """Isosurface of the binary occupancy field at level `iso`.

    Field samples sit at cell centers; output vertices are in world
    coordinates with outward normals pointing from occupied toward empty
    space. `smooth` applies a 3x3x3 box filter to the field first for a
    less stair-stepped surface.
    """
    if not 0.0 < iso < 1.0:
        raise ValueError("iso must be in (0, 1)")
    field = grid.occupancy.astype(np.float32)
    if smooth:
        field = uniform_filter(field, size=3, mode="constant")
    if not (field.max() > iso and field.min() < iso):
        return TriangleMesh.empty()
    # Zero-pad so surfaces at the grid boundary close instead of ending in
    # open edges.
    padded = np.pad(field, 1, mode="constant")
    verts, faces, _, _ = measure.marching_cubes(padded, level=iso)
    verts = grid.origin + (verts - 1.0 + 0.5) * grid.voxel_size
    return TriangleMesh(verts, faces)


def crop_by_trajectory(
    mesh: TriangleMesh,
    traj: Trajectory,
    radius: float = DEFAULT_CROP_RADIUS,
    height_cut: float = DEFAULT_HEIGHT_CUT,
) -> TriangleMesh:
    """Keep triangles whose centroid lies within `radius` (3D, inclusive)
    of any camera translation and below lowest camera height + height_cut."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if mesh.n_faces == 0:
        return mesh
    cams = traj.translations
    cent = mesh.centroids()
    if np.isinf(radius):
        near = np.ones(len(cent), dtype=bool)
    else:
        tree = cKDTree(cams)
        dist, _ = tree.query(cent)
        near = dist <= radius
    z_max = cams[:, 2].min() + height_cut
    keep = near & (cent[:, 2] <= z_max)
    return _reindex(mesh, keep)


def _reindex(mesh: TriangleMesh, face_mask: np.ndarray) -> TriangleMesh:
    """Drop faces outside the mask and compact the vertex array."""
    tris = mesh.triangles[face_mask]
    used = np.unique(tris)
    remap = np.full(len(mesh.vertices), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return TriangleMesh(mesh.vertices[used], remap[tris])


def weld_vertex_labels(vertices: np.ndarray, tol: float = WELD_TOL) -> np.ndarray:
    """Label vertices so exact duplicates (within tol) share one label."""
    key = np.round(vertices / tol).astype(np.int64)
    _, labels = np.unique(key, axis=0, return_inverse=True)
    return labels


def face_components(mesh: TriangleMesh) -> np.ndarray:
    """Connected-component id per face, via shared (welded) vertices."""
    n = mesh.n_faces
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    labels = weld_vertex_labels(mesh.vertices)
    parent = np.arange(labels.max() + 1)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tri_labels = labels[mesh.triangles]
    for a, b, c in tri_labels:
        ra, rb, rc = find(a), find(b), find(c)
        parent[rb] = ra
        parent[find(rc)] = ra
    roots = np.array([find(l) for l in tri_labels[:, 0]])
    _, comp = np.unique(roots, return_inverse=True)
    return comp


def filter_small_components(mesh: TriangleMesh, min_faces: int = DEFAULT_MIN_FACES) -> TriangleMesh:
    """Remove connected components with strictly fewer than min_faces faces."""
    if min_faces < 0:
        raise ValueError("min_faces must be >= 0")
    if mesh.n_faces == 0 or min_faces == 0:
        return mesh
    comp = face_components(mesh)
    sizes = np.bincount(comp)
    keep = sizes[comp] >= min_faces
    return _reindex(mesh, keep)


def extract_collision_mesh(
    cloud: PointCloud,
    traj: Trajectory | None = None,
    voxel_size: float = DEFAULT_VOXEL_SIZE,
    min_points_per_voxel: int = DEFAULT_MIN_POINTS_PER_VOXEL,
    iso: float = 0.5,
    smooth: bool = False,
    radius: float = DEFAULT_CROP_RADIUS,
    height_cut: float = DEFAULT_HEIGHT_CUT,
    min_faces: int = DEFAULT_MIN_FACES,
) -> TriangleMesh:
    """Full extraction pipeline in one pass."""
    grid = voxelize(cloud, voxel_size, min_points_per_voxel)
    mesh = marching_cubes(grid, iso, smooth)
    if traj is not None and len(traj) > 0:
        mesh = crop_by_trajectory(mesh, traj, radius, height_cut)
    return filter_small_components(mesh, min_faces)
