import numpy as np
import pytest

from wanderkit.meshing import (
    OccupancyGrid,
    PointCloud,
    TriangleMesh,
    crop_by_trajectory,
    extract_collision_mesh,
    face_components,
    filter_small_components,
    marching_cubes,
    voxelize,
    weld_vertex_labels,
)

from helpers import grid_floor, straight_line_trajectory


def _euler_characteristic(mesh: TriangleMesh) -> int:
    """V - E + F with duplicate vertices welded; 2 for a closed genus-0
    surface. Edge set built independently of any adjacency code in the
    package."""
    labels = weld_vertex_labels(mesh.vertices)
    used = sorted({labels[v] for tri in mesh.triangles for v in tri})
    edges = set()
    for tri in mesh.triangles:
        for e in range(3):
            a, b = labels[tri[e]], labels[tri[(e + 1) % 3]]
            edges.add((min(a, b), max(a, b)))
    return len(used) - len(edges) + mesh.n_faces


class TestContainers:
    def test_pointcloud_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            PointCloud(np.zeros((4, 2)))

    def test_mesh_drops_degenerate_faces(self):
        vs = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        tris = np.array([[0, 1, 2], [0, 0, 1], [1, 2, 2]])
        mesh = TriangleMesh(vs, tris)
        assert mesh.n_faces == 1

    def test_grid_cell_centers(self):
        occ = np.zeros((2, 2, 2), dtype=bool)
        occ[1, 0, 1] = True
        grid = OccupancyGrid(np.array([1.0, 2.0, 3.0]), 0.5, occ)
        centers = grid.cell_centers()
        assert centers.shape == (1, 3)
        assert np.allclose(centers[0], [1.0 + 1.5 * 0.5, 2.0 + 0.5 * 0.5, 3.0 + 1.5 * 0.5])


class TestVoxelize:
    def test_counts_against_dict_oracle(self, rng):
        pts = rng.uniform(0, 2, (500, 3))
        voxel = 0.25
        grid = voxelize(PointCloud(pts), voxel_size=voxel, min_points_per_voxel=3)
        counts = {}
        for p in pts:
            key = tuple(np.floor((p - grid.origin) / voxel).astype(int))
            counts[key] = counts.get(key, 0) + 1
        expected = {k for k, c in counts.items() if c >= 3}
        got = set(map(tuple, np.argwhere(grid.occupancy)))
        assert got == expected

    def test_min_points_threshold(self):
        pts = np.array([[0.05, 0.05, 0.05]] * 2 + [[0.95, 0.05, 0.05]])
        grid = voxelize(PointCloud(pts), voxel_size=0.1, min_points_per_voxel=2)
        assert grid.occupancy.sum() == 1

    def test_aabb_padding_keeps_boundary_points_inside(self):
        pts = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
        grid = voxelize(PointCloud(pts), voxel_size=0.5, min_points_per_voxel=1)
        assert (grid.origin < 0).all()
        assert grid.occupancy.sum() == 2

    def test_rejects_bad_params(self):
        pc = PointCloud(np.zeros((1, 3)))
        with pytest.raises(ValueError):
            voxelize(pc, voxel_size=0.0)
        with pytest.raises(ValueError):
            voxelize(pc, min_points_per_voxel=0)


def _ball_cloud(radius=1.0, step=0.08):
    ax = np.arange(-radius, radius + step, step)
    g = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), axis=-1).reshape(-1, 3)
    return PointCloud(g[np.linalg.norm(g, axis=1) <= radius])


class TestMarchingCubes:
    def test_ball_surface_is_closed(self):
        grid = voxelize(_ball_cloud(), voxel_size=0.1, min_points_per_voxel=1)
        mesh = marching_cubes(grid)
        assert mesh.n_faces > 100
        assert _euler_characteristic(mesh) == 2

    def test_ball_vertices_near_radius(self):
        grid = voxelize(_ball_cloud(), voxel_size=0.1, min_points_per_voxel=1)
        mesh = marching_cubes(grid)
        r = np.linalg.norm(mesh.vertices, axis=1)
        # surface extracted from a voxelized ball: within ~1.5 voxels
        assert abs(r.mean() - 1.0) < 0.15
        assert r.max() < 1.0 + 0.2

    def test_slab_top_plane_height(self):
        # occupied z-slab; top sheet must sit midway between the last
        # occupied and first empty cell centers
        occ = np.zeros((8, 8, 8), dtype=bool)
        occ[:, :, :3] = True
        grid = OccupancyGrid(np.zeros(3), 0.5, occ)
        mesh = marching_cubes(grid)
        assert _euler_characteristic(mesh) == 2
        z_top = (grid.origin[2] + (2 + 0.5) * 0.5 + grid.origin[2] + (3 + 0.5) * 0.5) / 2
        assert mesh.vertices[:, 2].max() == pytest.approx(z_top, abs=1e-9)

    def test_empty_grid_gives_empty_mesh(self):
        grid = OccupancyGrid(np.zeros(3), 0.1, np.zeros((3, 3, 3), dtype=bool))
        mesh = marching_cubes(grid)
        assert mesh.n_faces == 0


class TestComponents:
    def _two_fragments(self):
        # 40-face and 60-face fragments, far apart and unconnected
        a = grid_floor(nx=4, ny=5)  # 40 triangles
        b = grid_floor(nx=5, ny=6)  # 60 triangles
        b_shift = b.vertices + np.array([100.0, 0.0, 0.0])
        verts = np.vstack([a.vertices, b_shift])
        tris = np.vstack([a.triangles, b.triangles + len(a.vertices)])
        return TriangleMesh(verts, tris)

    def test_component_labels(self):
        mesh = self._two_fragments()
        comp = face_components(mesh)
        assert len(np.unique(comp)) == 2
        assert sorted(np.bincount(comp)) == [40, 60]

    def test_filter_drops_only_strictly_small(self):
        mesh = self._two_fragments()
        assert filter_small_components(mesh, min_faces=50).n_faces == 60
        # boundary: a component of exactly min_faces faces survives
        assert filter_small_components(mesh, min_faces=40).n_faces == 100
        assert filter_small_components(mesh, min_faces=41).n_faces == 60

    def test_filter_reindexes_vertices(self):
        mesh = self._two_fragments()
        out = filter_small_components(mesh, min_faces=50)
        assert out.triangles.max() < len(out.vertices)
        assert len(out.vertices) <= out.n_faces * 3


class TestCrop:
    def test_radius_crop(self):
        mesh = grid_floor(nx=40, ny=1)  # long strip along x
        traj = straight_line_trajectory(2, spacing=0.1)  # cameras near x=0
        out = crop_by_trajectory(mesh, traj, radius=5.0, height_cut=10.0)
        assert 0 < out.n_faces < mesh.n_faces
        assert out.centroids()[:, 0].max() <= 5.0 + 1e-9

    def test_height_cut_uses_lowest_camera(self):
        low = grid_floor(nx=2, ny=2, z=0.0)
        high = grid_floor(nx=2, ny=2, z=9.0)
        verts = np.vstack([low.vertices, high.vertices])
        tris = np.vstack([low.triangles, high.triangles + len(low.vertices)])
        mesh = TriangleMesh(verts, tris)
        traj = straight_line_trajectory(3, height=1.5)
        out = crop_by_trajectory(mesh, traj, radius=np.inf, height_cut=3.0)
        assert out.n_faces == low.n_faces
        assert out.centroids()[:, 2].max() <= 1.5 + 3.0

    def test_empty_trajectory_rejected(self):
        from wanderkit.geometry import Trajectory

        with pytest.raises(ValueError):
            crop_by_trajectory(grid_floor(2, 2), Trajectory(()), radius=1.0)


class TestPipeline:
    def test_extract_collision_mesh_end_to_end(self):
        cloud = _ball_cloud(radius=1.5, step=0.1)
        traj = straight_line_trajectory(3, height=0.0)
        mesh = extract_collision_mesh(
            cloud, traj, voxel_size=0.15, min_points_per_voxel=1, height_cut=5.0, min_faces=10
        )
        assert mesh.n_faces > 0
        assert len(np.unique(face_components(mesh))) >= 1
