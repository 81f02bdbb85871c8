"""Navmesh construction and shortest-path planning.

Baking keeps mesh faces whose normal is within a slope threshold of the
up axis, links them over shared (welded) edges, and drops tiny walkable
islands. Path queries run A* over a portal-midpoint graph followed by a
funnel (string-pulling) pass inside the traversed triangle corridor.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    EmptyNavmeshError,
    InvalidEndpointError,
    SamplingFailureError,
    UnreachableError,
)
from .geometry import Trajectory
from .meshing import TriangleMesh, weld_vertex_labels

DEFAULT_MAX_SLOPE = 35.0  # deg
DEFAULT_MIN_REGION_FACES = 20
DEFAULT_SNAP_CAP = 2.0  # m; beyond this a query point is off-scene
DEFAULT_AGENT_OFFSET = 0.2  # m inward portal offset during funnel
DEFAULT_SAMPLE_ATTEMPTS = 1000


def closest_point_on_triangle(p: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Closest point to p on triangle abc (Ericson, Real-Time Collision
    Detection, 5.1.5)."""
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = ab @ ap
    d2 = ac @ ap
    if d1 <= 0 and d2 <= 0:
        return a
    bp = p - b
    d3 = ab @ bp
    d4 = ac @ bp
    if d3 >= 0 and d4 <= d3:
        return b
    vc = d1 * d4 - d3 * d2
    if vc <= 0 and d1 >= 0 and d3 <= 0:
        v = d1 / (d1 - d3)
        return a + v * ab
    cp = p - c
    d5 = ab @ cp
    d6 = ac @ cp
    if d6 >= 0 and d5 <= d6:
        return c
    vb = d5 * d2 - d1 * d6
    if vb <= 0 and d2 >= 0 and d6 <= 0:
        w = d2 / (d2 - d6)
        return a + w * ac
    va = d3 * d6 - d5 * d4
    if va <= 0 and (d4 - d3) >= 0 and (d5 - d6) >= 0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return b + w * (c - b)
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return a + ab * v + ac * w


@dataclass(frozen=True)
class NavMesh:
    """Walkable triangle subset with shared-edge adjacency.

    `triangles` index into `vertices`; `source_face_ids` map each walkable
    triangle back to the face index of the mesh it was baked from.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    adjacency: tuple[tuple[int, ...], ...]
    regions: np.ndarray
    source_face_ids: np.ndarray
    up_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    # lazy caches, not part of the value
    def __post_init__(self):
        object.__setattr__(self, "_tree", None)
        object.__setattr__(self, "_graph", None)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def triangle_points(self, t: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        i, j, k = self.triangles[t]
        return self.vertices[i], self.vertices[j], self.vertices[k]

    def centroids(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    def _snap_index(self):
        if self._tree is None:
            cent = self.centroids()
            tv = self.vertices[self.triangles]
            rmax = np.linalg.norm(tv - cent[:, None, :], axis=2).max()
            object.__setattr__(self, "_tree", (cKDTree(cent), float(rmax)))
        return self._tree

    def snap(self, point) -> tuple[np.ndarray, int, float]:
        """Closest point on any walkable triangle.

        Returns (surface point, triangle id, distance); ties broken by
        lowest triangle id.
        """
        if self.n_triangles == 0:
            raise EmptyNavmeshError("navmesh has no triangles")
        p = np.asarray(point, dtype=float).reshape(3)
        tree, rmax = self._snap_index()
        d0, _ = tree.query(p)
        cand = sorted(tree.query_ball_point(p, d0 + rmax + 1e-9))
        best_t, best_q, best_d = -1, None, math.inf
        for t in cand:
            q = closest_point_on_triangle(p, *self.triangle_points(t))
            d = float(np.linalg.norm(p - q))
            if d < best_d - 1e-12:
                best_t, best_q, best_d = t, q, d
        return best_q, best_t, best_d

    def portal_graph(self):
        """Portal-midpoint graph: one node per shared edge between adjacent
        walkable triangles; nodes of the same triangle are interconnected.

        Returns (node_positions, node_edges, tri_nodes, portal_verts) where
        tri_nodes[t] lists the node ids on triangle t and portal_verts[n]
        holds the two welded-edge endpoint coordinates of node n.
        """
        if self._graph is not None:
            return self._graph
        labels = weld_vertex_labels(self.vertices)
        edge_nodes: dict[tuple[int, int], int] = {}
        positions: list[np.ndarray] = []
        portal_verts: list[tuple[np.ndarray, np.ndarray]] = []
        tri_nodes: list[list[int]] = [[] for _ in range(self.n_triangles)]
        for t in range(self.n_triangles):
            tri = self.triangles[t]
            for e in range(3):
                va, vb = tri[e], tri[(e + 1) % 3]
                key = tuple(sorted((labels[va], labels[vb])))
                n = edge_nodes.get(key)
                if n is None:
                    # only create a node if some neighbor shares this edge
                    if any(
                        key
                        in (
                            tuple(
                                sorted(
                                    (
                                        labels[self.triangles[u][m]],
                                        labels[self.triangles[u][(m + 1) % 3]],
                                    )
                                )
                            )
                            for m in range(3)
                        )
                        for u in self.adjacency[t]
                    ):
                        n = len(positions)
                        edge_nodes[key] = n
                        positions.append((self.vertices[va] + self.vertices[vb]) / 2.0)
                        portal_verts.append((self.vertices[va].copy(), self.vertices[vb].copy()))
                    else:
                        continue
                tri_nodes[t].append(n)
        node_edges: list[list[tuple[int, float]]] = [[] for _ in positions]
        for t in range(self.n_triangles):
            ns = tri_nodes[t]
            for x in range(len(ns)):
                for y in range(x + 1, len(ns)):
                    a, b = ns[x], ns[y]
                    w = float(np.linalg.norm(positions[a] - positions[b]))
                    node_edges[a].append((b, w))
                    node_edges[b].append((a, w))
    # node -> triangles containing it
        node_tris: list[list[int]] = [[] for _ in positions]
        for t, ns in enumerate(tri_nodes):
            for n in ns:
                node_tris[n].append(t)
        graph = (np.array(positions).reshape(-1, 3), node_edges, tri_nodes, portal_verts, node_tris)
        object.__setattr__(self, "_graph", graph)
        return graph


@dataclass(frozen=True)
class Path:
    """Polyline on the navmesh surface."""

    waypoints: np.ndarray
    length: float

    @staticmethod
    def from_waypoints(waypoints: np.ndarray) -> "Path":
        w = np.asarray(waypoints, dtype=float).reshape(-1, 3)
        length = float(np.linalg.norm(np.diff(w, axis=0), axis=1).sum()) if len(w) > 1 else 0.0
        return Path(w, length)


def _face_normals(mesh: TriangleMesh) -> np.ndarray:
    tv = mesh.vertices[mesh.triangles]
    n = np.cross(tv[:, 1] - tv[:, 0], tv[:, 2] - tv[:, 0])
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    norm[norm == 0] = 1.0
    return n / norm


def bake_navmesh(
    mesh: TriangleMesh,
    max_slope: float = DEFAULT_MAX_SLOPE,
    min_region_faces: int = DEFAULT_MIN_REGION_FACES,
    up_axis=(0.0, 0.0, 1.0),
) -> NavMesh:
    """Extract the walkable triangle subset of a collision mesh."""
    if not 0.0 < max_slope < 90.0:
        raise ValueError("max_slope must be in (0, 90) degrees")
    up = np.asarray(up_axis, dtype=float)
    up = up / np.linalg.norm(up)
    normals = _face_normals(mesh)
    cos_thresh = math.cos(math.radians(max_slope))
    walkable = np.where(normals @ up >= cos_thresh - 1e-12)[0]
    if len(walkable) == 0:
        raise EmptyNavmeshError("no faces within the slope threshold")

    labels = weld_vertex_labels(mesh.vertices)
    edge_owner: dict[tuple[int, int], list[int]] = {}
    for local, f in enumerate(walkable):
        tri = mesh.triangles[f]
        for e in range(3):
            key = tuple(sorted((labels[tri[e]], labels[tri[(e + 1) % 3]])))
            edge_owner.setdefault(key, []).append(local)
    adjacency: list[set[int]] = [set() for _ in walkable]
    for faces in edge_owner.values():
        for x in range(len(faces)):
            for y in range(x + 1, len(faces)):
                adjacency[faces[x]].add(faces[y])
                adjacency[faces[y]].add(faces[x])

    # connected regions over the walkable adjacency
    regions = np.full(len(walkable), -1, dtype=np.int64)
    rid = 0
    for seed in range(len(walkable)):
        if regions[seed] >= 0:
            continue
        stack = [seed]
        regions[seed] = rid
        while stack:
            t = stack.pop()
            for u in adjacency[t]:
                if regions[u] < 0:
                    regions[u] = rid
                    stack.append(u)
        rid += 1
    sizes = np.bincount(regions)
    keep = np.where(sizes[regions] >= min_region_faces)[0]
    if len(keep) == 0:
        raise EmptyNavmeshError("all walkable regions below min_region_faces")

    remap = {old: new for new, old in enumerate(keep)}
    adj = tuple(
        tuple(sorted(remap[u] for u in adjacency[old] if u in remap)) for old in keep
    )
    kept_regions = regions[keep]
    _, kept_regions = np.unique(kept_regions, return_inverse=True)
    return NavMesh(
        vertices=mesh.vertices.copy(),
        triangles=mesh.triangles[walkable[keep]].copy(),
        adjacency=adj,
        regions=kept_regions,
        source_face_ids=walkable[keep].copy(),
        up_axis=up,
    )


def snap(navmesh: NavMesh, point) -> tuple[np.ndarray, int]:
    """Closest navmesh surface point and its triangle id."""
    q, t, _ = navmesh.snap(point)
    return q, t


def _snap_checked(navmesh: NavMesh, point, snap_cap: float):
    q, t, d = navmesh.snap(point)
    if d > snap_cap:
        raise InvalidEndpointError(f"point {np.asarray(point)} is {d:.3f} m from the navmesh (cap {snap_cap})")
    return q, t


def _astar_nodes(
    navmesh: NavMesh,
    start: np.ndarray,
    tri_s: int,
    goal: np.ndarray,
    tri_g: int,
    penalize_tris: set[int] | None = None,
):
    """A* over the portal graph with virtual start/goal nodes.

    Edges through triangles in `penalize_tris` cost extra, which steers a
    re-search into a different corridor (alternative-route trick).

    Returns (portal node sequence, graph path length).
    """
    positions, node_edges, tri_nodes, _, node_tris = navmesh.portal_graph()
    n = len(positions)
    START, GOAL = n, n + 1
    PEN = 1e6

    def neighbors(u):
        if u == START:
            for v in tri_nodes[tri_s]:
                yield v, float(np.linalg.norm(positions[v] - start))
            if tri_s == tri_g:
                yield GOAL, float(np.linalg.norm(goal - start))
        elif u == GOAL:
            return
        elif penalize_tris is None:
            yield from node_edges[u]
            if u in tri_nodes[tri_g]:
                yield GOAL, float(np.linalg.norm(goal - positions[u]))
        else:
            for t in node_tris[u]:
                mult = PEN if t in penalize_tris and t not in (tri_s, tri_g) else 1.0
                for v in tri_nodes[t]:
                    if v != u:
                        yield v, mult * float(np.linalg.norm(positions[v] - positions[u]))
            if u in tri_nodes[tri_g]:
                yield GOAL, float(np.linalg.norm(goal - positions[u]))

    def h(u):
        if u == GOAL:
            return 0.0
        p = start if u == START else positions[u]
        return float(np.linalg.norm(goal - p))

    dist = {START: 0.0}
    prev: dict[int, int] = {}
    pq = [(h(START), START)]
    closed: set[int] = set()
    while pq:
        _, u = heapq.heappop(pq)
        if u in closed:
            continue
        if u == GOAL:
            break
        closed.add(u)
        for v, w in neighbors(u):
            nd = dist[u] + w
            if nd < dist.get(v, math.inf) - 1e-15:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(pq, (nd + h(v), v))
    if GOAL not in dist:
        raise UnreachableError("no path through the portal graph")
    seq = []
    u = GOAL
    while u != START:
        u = prev[u]
        if u != START:
            seq.append(u)
    seq.reverse()
    return seq, dist[GOAL]


def _corridor_from_nodes(
    navmesh: NavMesh, tri_s: int, tri_g: int, node_seq: list[int]
) -> tuple[list[int], list[int]]:
    """Triangle corridor implied by the portal sequence.

    The triangle traversed after portal k is the one shared by portals k
    and k+1 (tri_g after the last portal); consecutive A* nodes always
    share a triangle because graph edges only exist within one.
    """
    node_tris = navmesh.portal_graph()[4]
    corridor = [tri_s]
    for k, n in enumerate(node_seq):
        if k + 1 < len(node_seq):
            shared = set(node_tris[n]) & set(node_tris[node_seq[k + 1]])
            shared.discard(corridor[-1])
            nxt = min(shared) if shared else corridor[-1]
        else:
            nxt = tri_g
        corridor.append(nxt)
    return corridor, list(node_seq)


def _triarea2(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _same2(a, b) -> bool:
    return abs(a[0] - b[0]) <= 1e-8 and abs(a[1] - b[1]) <= 1e-8


def _funnel_2d(start2, goal2, portals2):
    """Simple stupid funnel over 2D portals [(left, right), ...]."""
    pts = [np.asarray(start2, dtype=float)]
    portal = [(np.asarray(start2, float), np.asarray(start2, float))]
    portal += [(np.asarray(l, float), np.asarray(r, float)) for l, r in portals2]
    portal.append((np.asarray(goal2, float), np.asarray(goal2, float)))

    apex = portal[0][0]
    left, right = portal[0][0], portal[0][1]
    apex_i = left_i = right_i = 0
    i = 1
    while i < len(portal):
        pl, pr = portal[i]
        # tighten the right side (positive area = point left of the ray)
        if _triarea2(apex, right, pr) >= -1e-12:
            if _same2(apex, right) or _triarea2(apex, left, pr) < 1e-12:
                right, right_i = pr, i
            else:
                # right crossed over left: the left post becomes the apex
                pts.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # tighten the left side
        if _triarea2(apex, left, pl) <= 1e-12:
            if _same2(apex, left) or _triarea2(apex, right, pl) > -1e-12:
                left, left_i = pl, i
            else:
                pts.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    pts.append(np.asarray(goal2, dtype=float))
    out = [pts[0]]
    for p in pts[1:]:
        if not _same2(p, out[-1]):
            out.append(p)
    return out


def _plane_basis(navmesh: NavMesh):
    """Cached orthonormal basis perpendicular to the up axis."""
    cached = getattr(navmesh, "_basis", None)
    if cached is not None:
        return cached
    up = navmesh.up_axis
    a = np.array([1.0, 0.0, 0.0]) if abs(up[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(up, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(up, e1)
    object.__setattr__(navmesh, "_basis", (e1, e2))
    return e1, e2


def _project2(navmesh: NavMesh, p: np.ndarray) -> np.ndarray:
    """Drop the up-axis component (planar coordinates for the funnel)."""
    e1, e2 = _plane_basis(navmesh)
    return np.array([p @ e1, p @ e2])


def _lift(navmesh: NavMesh, p2: np.ndarray, corridor: list[int], ref: np.ndarray) -> np.ndarray:
    """Map a planar funnel waypoint back onto the corridor surface."""
    up = navmesh.up_axis
    e1, e2 = _plane_basis(navmesh)
    base = p2[0] * e1 + p2[1] * e2 + (ref @ up) * up
    q, _, _ = navmesh.snap(base)
    return q


def shortest_path(
    navmesh: NavMesh,
    start,
    goal,
    smooth: bool = True,
    agent_offset: float = DEFAULT_AGENT_OFFSET,
    snap_cap: float = DEFAULT_SNAP_CAP,
) -> Path:
    """Shortest collision-free path between two points on the navmesh.

    A* runs over the portal-midpoint graph; with smooth=True a funnel
    pass straightens the polyline inside the traversed corridor (portals
    shrunk inward by agent_offset). smooth=False returns the raw graph
    polyline, whose length matches a Dijkstra oracle on the same graph.
    """
    s, tri_s = _snap_checked(navmesh, start, snap_cap)
    g, tri_g = _snap_checked(navmesh, goal, snap_cap)
    if navmesh.regions[tri_s] != navmesh.regions[tri_g]:
        raise UnreachableError("endpoints lie in different navmesh regions")
    if np.allclose(s, g):
        return Path.from_waypoints([s])
    if tri_s == tri_g:
        return Path.from_waypoints([s, g])
    if not smooth:
        node_seq, _ = _astar_nodes(navmesh, s, tri_s, g, tri_g)
        positions = navmesh.portal_graph()[0]
        wps = [s] + [positions[n] for n in node_seq] + [g]
        return Path.from_waypoints(np.array(wps))

    # the funnel is direction-dependent; evaluate both and keep the
    # shorter so geodesic_distance is symmetric
    fwd = _shortcut(navmesh, _smooth_waypoints(navmesh, s, tri_s, g, tri_g, agent_offset))
    bwd = _shortcut(navmesh, _smooth_waypoints(navmesh, g, tri_g, s, tri_s, agent_offset))
    len_f = float(np.linalg.norm(np.diff(np.array(fwd), axis=0), axis=1).sum())
    len_b = float(np.linalg.norm(np.diff(np.array(bwd), axis=0), axis=1).sum())
    out = fwd if len_f <= len_b else bwd[::-1]
    return Path.from_waypoints(np.array(out))


def _smooth_waypoints(
    navmesh: NavMesh,
    s: np.ndarray,
    tri_s: int,
    g: np.ndarray,
    tri_g: int,
    agent_offset: float,
) -> list[np.ndarray]:
    """Funnel-smoothed waypoint list from s to g (both on the navmesh).

    A second A* with the first corridor penalized probes the alternative
    route (e.g. the other side of an obstacle); the shorter funnel wins.
    """
    node_seq, _ = _astar_nodes(navmesh, s, tri_s, g, tri_g)
    best = _funnel_corridor(navmesh, s, tri_s, g, tri_g, node_seq, agent_offset)
    corridor1 = set(_corridor_from_nodes(navmesh, tri_s, tri_g, node_seq)[0])
    try:
        node_seq2, _ = _astar_nodes(navmesh, s, tri_s, g, tri_g, penalize_tris=corridor1)
    except UnreachableError:
        node_seq2 = node_seq
    if node_seq2 != node_seq:
        alt = _funnel_corridor(navmesh, s, tri_s, g, tri_g, node_seq2, agent_offset)
        if _polyline_length(alt) < _polyline_length(best):
            best = alt
    return best


def _polyline_length(wps: list[np.ndarray]) -> float:
    return float(np.linalg.norm(np.diff(np.array(wps), axis=0), axis=1).sum())


def _funnel_corridor(
    navmesh: NavMesh,
    s: np.ndarray,
    tri_s: int,
    g: np.ndarray,
    tri_g: int,
    node_seq: list[int],
    agent_offset: float,
) -> list[np.ndarray]:
    """Funnel pass over one triangle corridor."""
    corridor, portal_nodes = _corridor_from_nodes(navmesh, tri_s, tri_g, node_seq)
    portal_verts = navmesh.portal_graph()[3]
    cent2 = [_project2(navmesh, c) for c in navmesh.centroids()[corridor]]
    portals2 = []
    for k, n in enumerate(portal_nodes):
        va, vb = portal_verts[n]
        # inward offset, capped so the portal keeps a usable width
        edge = vb - va
        elen = float(np.linalg.norm(edge))
        off = min(agent_offset, 0.4 * elen)
        if elen > 0:
            va = va + edge / elen * off
            vb = vb - edge / elen * off
        a2, b2 = _project2(navmesh, va), _project2(navmesh, vb)
        # travel direction across this portal: centroid of the triangle
        # before it to the centroid after it
        d = cent2[k + 1] - cent2[k]
        if np.linalg.norm(d) < 1e-12:
            d = _project2(navmesh, g) - _project2(navmesh, s)
        mid = (a2 + b2) / 2.0
        # endpoint to the left of the travel direction becomes the left post
        if d[0] * (a2[1] - mid[1]) - d[1] * (a2[0] - mid[0]) >= 0:
            portals2.append((a2, b2))
        else:
            portals2.append((b2, a2))
    pts2 = _funnel_2d(_project2(navmesh, s), _project2(navmesh, g), portals2)
    wps = [s]
    for p2 in pts2[1:-1]:
        wps.append(_lift(navmesh, p2, corridor, s))
    wps.append(g)
    out = [wps[0]]
    for p in wps[1:]:
        if np.linalg.norm(p - out[-1]) > 1e-12:
            out.append(p)
    return out


_SHORTCUT_STEP = 0.05  # m sampling pitch along a candidate segment
_SHORTCUT_TOL = 1e-3  # m allowed off-surface deviation


def _segment_on_navmesh(navmesh: NavMesh, a: np.ndarray, b: np.ndarray, region: int) -> bool:
    """True when the straight segment a-b stays on the walkable surface of
    the given region (sampled check, batched over the sample points)."""
    length = float(np.linalg.norm(b - a))
    n = max(2, int(math.ceil(length / _SHORTCUT_STEP)) + 1)
    pts = a + np.linspace(0.0, 1.0, n)[:, None] * (b - a)
    tree, rmax = navmesh._snap_index()
    cand_lists = tree.query_ball_point(pts, _SHORTCUT_TOL + rmax + 1e-9)
    for p, cand in zip(pts, cand_lists):
        best_d, best_t = math.inf, -1
        for t in sorted(cand):
            q = closest_point_on_triangle(p, *navmesh.triangle_points(t))
            d = float(np.linalg.norm(p - q))
            if d < best_d - 1e-12:
                best_d, best_t = d, t
            if d <= 1e-9 and navmesh.regions[t] == region:
                best_d, best_t = d, t
                break
        if best_t < 0 or best_d > _SHORTCUT_TOL or navmesh.regions[best_t] != region:
            return False
    return True


def _shortcut(navmesh: NavMesh, wps: list[np.ndarray]) -> list[np.ndarray]:
    """Greedy straightening: from each waypoint, jump to the farthest later
    waypoint reachable by a straight on-surface segment."""
    if len(wps) < 3:
        return wps
    _, tri0, _ = navmesh.snap(wps[0])
    region = navmesh.regions[tri0]
    out = [wps[0]]
    i = 0
    while i < len(wps) - 1:
        j = len(wps) - 1
        while j > i + 1 and not _segment_on_navmesh(navmesh, wps[i], wps[j], region):
            j -= 1
        out.append(wps[j])
        i = j
    return out


def geodesic_distance(navmesh: NavMesh, a, b, **kwargs) -> float:
    """Length of shortest_path(navmesh, a, b)."""
    return shortest_path(navmesh, a, b, **kwargs).length


def sample_endpoints(
    navmesh: NavMesh,
    cameras: Trajectory,
    vicinity: float,
    min_geodesic: float,
    seed: int,
    max_attempts: int = DEFAULT_SAMPLE_ATTEMPTS,
    snap_cap: float = DEFAULT_SNAP_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw a (start, goal) pair near camera positions.

    Camera positions are perturbed within a disc of radius `vicinity`
    (perpendicular to the up axis), snapped onto the navmesh, and a pair
    is accepted once its geodesic separation reaches min_geodesic.
    Deterministic per seed.
    """
    if vicinity < 0:
        raise ValueError("vicinity must be >= 0")
    if len(cameras) == 0:
        raise ValueError("empty camera trajectory")
    rng = np.random.default_rng(seed)
    cams = cameras.translations
    up = navmesh.up_axis
    a = np.array([1.0, 0.0, 0.0]) if abs(up[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(up, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(up, e1)

    def draw():
        c = cams[rng.integers(len(cams))]
        r = vicinity * math.sqrt(rng.random())
        th = 2.0 * math.pi * rng.random()
        p = c + r * math.cos(th) * e1 + r * math.sin(th) * e2
        q, t, d = navmesh.snap(p)
        if d > snap_cap:
            return None
        return q, t

    for _ in range(max_attempts):
        s = draw()
        g = draw()
        if s is None or g is None:
            continue
        if navmesh.regions[s[1]] != navmesh.regions[g[1]]:
            continue
        try:
            if geodesic_distance(navmesh, s[0], g[0], snap_cap=snap_cap) >= min_geodesic:
                return s[0], g[0]
        except UnreachableError:
            continue
    raise SamplingFailureError(f"no endpoint pair found in {max_attempts} attempts")
