import numpy as np
import pytest

from wanderkit.errors import (
    EmptyNavmeshError,
    InvalidEndpointError,
    SamplingFailureError,
    UnreachableError,
)
from wanderkit.geometry import Pose, Trajectory
from wanderkit.meshing import TriangleMesh
from wanderkit.navmesh import (
    Path,
    bake_navmesh,
    closest_point_on_triangle,
    geodesic_distance,
    sample_endpoints,
    shortest_path,
)

from helpers import grid_floor, u_corridor_mesh
from oracles import dijkstra_path_length_oracle

# taut path around the wall: (5,2) -> (1.8,4) -> (1.8,6) -> (5,8) with the
# default 0.2 m portal inset
U_EXPECTED_LENGTH = 9.547184905645285


@pytest.fixture(scope="module")
def flat_nav():
    return bake_navmesh(grid_floor(), min_region_faces=1)


@pytest.fixture(scope="module")
def u_nav():
    return bake_navmesh(u_corridor_mesh(), min_region_faces=1)


class TestClosestPointOnTriangle:
    def test_interior_projection(self):
        a, b, c = np.zeros(3), np.array([2.0, 0, 0]), np.array([0, 2.0, 0])
        q = closest_point_on_triangle(np.array([0.5, 0.5, 3.0]), a, b, c)
        assert np.allclose(q, [0.5, 0.5, 0.0])

    def test_clamps_to_vertex_and_edge(self):
        a, b, c = np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
        assert np.allclose(closest_point_on_triangle(np.array([-1.0, -1.0, 0.0]), a, b, c), a)
        assert np.allclose(
            closest_point_on_triangle(np.array([0.5, -2.0, 0.0]), a, b, c), [0.5, 0.0, 0.0]
        )

    def test_matches_dense_sampling_oracle(self, rng):
        a, b, c = rng.uniform(-1, 1, (3, 3))
        u = np.linspace(0, 1, 60)
        bary = [(x, y) for x in u for y in u if x + y <= 1.0]
        surface = np.array([a + x * (b - a) + y * (c - a) for x, y in bary])
        for _ in range(20):
            p = rng.uniform(-2, 2, 3)
            q = closest_point_on_triangle(p, a, b, c)
            brute = surface[np.argmin(np.linalg.norm(surface - p, axis=1))]
            assert np.linalg.norm(p - q) <= np.linalg.norm(p - brute) + 1e-9


class TestBake:
    def test_flat_floor_fully_walkable_one_region(self, flat_nav):
        assert flat_nav.n_triangles == 200
        assert len(np.unique(flat_nav.regions)) == 1

    def test_steep_faces_excluded(self):
        floor = grid_floor(nx=5, ny=5)
        # vertical quad rising from the floor edge
        wall_v = np.array(
            [[0, 0, 0], [1, 0, 0], [1, 0, 2.0], [0, 0, 2.0]], dtype=float
        )
        verts = np.vstack([floor.vertices, wall_v])
        n0 = len(floor.vertices)
        wall_t = np.array([[n0, n0 + 1, n0 + 2], [n0, n0 + 2, n0 + 3]])
        mesh = TriangleMesh(verts, np.vstack([floor.triangles, wall_t]))
        nav = bake_navmesh(mesh, max_slope=35.0, min_region_faces=1)
        assert nav.n_triangles == floor.n_faces

    def test_slope_threshold_is_inclusive(self):
        # 30-degree ramp: walkable at max_slope 30, not at 25
        c, s = np.cos(np.radians(30)), np.sin(np.radians(30))
        verts = np.array([[0, 0, 0], [1, 0, 0], [1, c, s], [0, c, s]], dtype=float)
        tris = np.array([[0, 1, 2], [0, 2, 3]])
        mesh = TriangleMesh(verts, tris)
        assert bake_navmesh(mesh, max_slope=30.0, min_region_faces=1).n_triangles == 2
        with pytest.raises(EmptyNavmeshError):
            bake_navmesh(mesh, max_slope=25.0, min_region_faces=1)

    def test_min_region_faces_drops_islands(self):
        big = grid_floor(nx=5, ny=5)
        small = grid_floor(nx=1, ny=1)
        sv = small.vertices + np.array([50.0, 0, 0])
        mesh = TriangleMesh(
            np.vstack([big.vertices, sv]),
            np.vstack([big.triangles, small.triangles + len(big.vertices)]),
        )
        nav = bake_navmesh(mesh, min_region_faces=10)
        assert nav.n_triangles == big.n_faces
        with pytest.raises(EmptyNavmeshError):
            bake_navmesh(mesh, min_region_faces=1000)

    def test_regions_relabelled_contiguously(self):
        a = grid_floor(nx=5, ny=5)
        b = grid_floor(nx=5, ny=5)
        bv = b.vertices + np.array([50.0, 0, 0])
        mesh = TriangleMesh(
            np.vstack([a.vertices, bv]), np.vstack([a.triangles, b.triangles + len(a.vertices)])
        )
        nav = bake_navmesh(mesh, min_region_faces=1)
        assert sorted(np.unique(nav.regions)) == [0, 1]


class TestSnap:
    def test_projects_onto_surface(self, flat_nav):
        q, t, d = flat_nav.snap([3.3, 4.7, 2.0])
        assert np.allclose(q, [3.3, 4.7, 0.0])
        assert d == pytest.approx(2.0)
        assert 0 <= t < flat_nav.n_triangles

    def test_tie_broken_by_lowest_triangle_id(self, flat_nav):
        # a grid vertex touches several triangles at distance zero
        q, t, d = flat_nav.snap([4.0, 4.0, 1.0])
        candidates = [
            ti
            for ti in range(flat_nav.n_triangles)
            if np.isclose(
                np.linalg.norm(
                    closest_point_on_triangle(
                        np.array([4.0, 4.0, 1.0]), *flat_nav.triangle_points(ti)
                    )
                    - np.array([4.0, 4.0, 1.0])
                ),
                1.0,
            )
        ]
        assert t == min(candidates)


class TestShortestPathGraph:
    """smooth=False output must match an independent Dijkstra on the same
    portal-midpoint graph."""

    def _pairs(self, nav, rng, n):
        lo = nav.vertices.min(axis=0)[:2] + 0.3
        hi = nav.vertices.max(axis=0)[:2] - 0.3
        out = []
        while len(out) < n:
            a = np.array([*rng.uniform(lo, hi), 0.0])
            b = np.array([*rng.uniform(lo, hi), 0.0])
            sa, ta, _ = nav.snap(a)
            sb, tb, _ = nav.snap(b)
            if ta != tb:
                out.append((sa, ta, sb, tb))
        return out

    def test_flat_matches_dijkstra(self, flat_nav, rng):
        for s, ts, g, tg in self._pairs(flat_nav, rng, 15):
            got = shortest_path(flat_nav, s, g, smooth=False).length
            want = dijkstra_path_length_oracle(flat_nav, s, ts, g, tg)
            assert got == pytest.approx(want, abs=1e-9)

    def test_u_corridor_matches_dijkstra(self, u_nav, rng):
        for s, ts, g, tg in self._pairs(u_nav, rng, 15):
            got = shortest_path(u_nav, s, g, smooth=False).length
            want = dijkstra_path_length_oracle(u_nav, s, ts, g, tg)
            assert got == pytest.approx(want, abs=1e-9)


class TestShortestPathSmooth:
    def test_flat_floor_paths_are_straight(self, flat_nav, rng):
        for _ in range(25):
            a = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            b = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            path = shortest_path(flat_nav, a, b)
            assert path.length == pytest.approx(np.linalg.norm(a - b), abs=1e-9)

    def test_u_corridor_taut_path(self, u_nav):
        path = shortest_path(u_nav, [5.0, 2.0, 0.0], [5.0, 8.0, 0.0])
        assert path.length == pytest.approx(U_EXPECTED_LENGTH, abs=1e-9)
        assert len(path.waypoints) == 4

    def test_path_clears_the_gap(self, u_nav):
        path = shortest_path(u_nav, [5.0, 2.0, 0.0], [5.0, 8.0, 0.0])
        # densely sample the polyline; every sample must stay on the mesh
        for p, q in zip(path.waypoints[:-1], path.waypoints[1:]):
            for t in np.linspace(0, 1, 50):
                _, _, d = u_nav.snap(p + t * (q - p))
                assert d <= 1e-3

    def test_waypoints_lie_on_surface(self, u_nav, rng):
        for _ in range(10):
            a = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            b = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            sa, _, _ = u_nav.snap(a)
            sb, _, _ = u_nav.snap(b)
            for w in shortest_path(u_nav, sa, sb).waypoints:
                _, _, d = u_nav.snap(w)
                assert d <= 1e-6

    def test_same_point_and_same_triangle_shortcuts(self, flat_nav):
        p = np.array([2.2, 2.2, 0.0])
        assert shortest_path(flat_nav, p, p).length == 0.0
        q = np.array([2.3, 2.1, 0.0])
        path = shortest_path(flat_nav, p, q)
        assert len(path.waypoints) == 2

    def test_off_mesh_endpoint_rejected(self, flat_nav):
        with pytest.raises(InvalidEndpointError):
            shortest_path(flat_nav, [50.0, 50.0, 0.0], [1.0, 1.0, 0.0])

    def test_cross_region_rejected(self):
        a = grid_floor(nx=5, ny=5)
        b = grid_floor(nx=5, ny=5)
        bv = b.vertices + np.array([50.0, 0, 0])
        mesh = TriangleMesh(
            np.vstack([a.vertices, bv]), np.vstack([a.triangles, b.triangles + len(a.vertices)])
        )
        nav = bake_navmesh(mesh, min_region_faces=1)
        with pytest.raises(UnreachableError):
            shortest_path(nav, [1.0, 1.0, 0.0], [51.0, 1.0, 0.0], snap_cap=5.0)


class TestGeodesicDistance:
    def test_symmetric_on_u_corridor(self, u_nav, rng):
        for _ in range(20):
            a = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            b = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            sa, _, _ = u_nav.snap(a)
            sb, _, _ = u_nav.snap(b)
            d_ab = geodesic_distance(u_nav, sa, sb)
            d_ba = geodesic_distance(u_nav, sb, sa)
            assert d_ab == pytest.approx(d_ba, abs=1e-9)

    def test_never_below_euclidean(self, u_nav, rng):
        for _ in range(20):
            a = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            b = np.array([*rng.uniform(0.5, 9.5, 2), 0.0])
            sa, _, _ = u_nav.snap(a)
            sb, _, _ = u_nav.snap(b)
            assert geodesic_distance(u_nav, sa, sb) >= np.linalg.norm(sa - sb) - 1e-9


class TestPathContainer:
    def test_length_is_polyline_sum(self):
        wps = np.array([[0, 0, 0], [3, 0, 0], [3, 4, 0]], dtype=float)
        assert Path.from_waypoints(wps).length == pytest.approx(7.0)

    def test_single_waypoint_zero_length(self):
        assert Path.from_waypoints(np.zeros((1, 3))).length == 0.0


class TestSampleEndpoints:
    def _cams(self):
        poses = tuple(
            Pose(np.eye(3), np.array([2.0 + i, 2.0, 1.2]), timestamp=float(i)) for i in range(6)
        )
        return Trajectory(poses)

    def test_deterministic_per_seed(self, flat_nav):
        a1 = sample_endpoints(flat_nav, self._cams(), vicinity=1.0, min_geodesic=2.0, seed=4)
        a2 = sample_endpoints(flat_nav, self._cams(), vicinity=1.0, min_geodesic=2.0, seed=4)
        b = sample_endpoints(flat_nav, self._cams(), vicinity=1.0, min_geodesic=2.0, seed=5)
        assert np.allclose(a1[0], a2[0]) and np.allclose(a1[1], a2[1])
        assert not (np.allclose(a1[0], b[0]) and np.allclose(a1[1], b[1]))

    def test_respects_min_geodesic(self, flat_nav):
        for seed in range(5):
            s, g = sample_endpoints(flat_nav, self._cams(), vicinity=1.5, min_geodesic=3.0, seed=seed)
            assert geodesic_distance(flat_nav, s, g) >= 3.0

    def test_zero_vicinity_stays_under_cameras(self, flat_nav):
        s, g = sample_endpoints(flat_nav, self._cams(), vicinity=0.0, min_geodesic=1.0, seed=0)
        cams2 = self._cams().translations[:, :2]
        for p in (s, g):
            assert np.min(np.linalg.norm(cams2 - p[:2], axis=1)) < 1e-9

    def test_unsatisfiable_budget_raises(self, flat_nav):
        with pytest.raises(SamplingFailureError):
            sample_endpoints(
                flat_nav, self._cams(), vicinity=0.5, min_geodesic=1e6, seed=0, max_attempts=50
            )
