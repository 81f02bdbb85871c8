"""Closed-loop navigation episode harness.

A kinematic agent (forward velocity + yaw rate) walks on a navmesh; moves
that would leave the walkable surface are blocked. Rewards follow a
distance-based shaping scheme with terminal bonuses/penalties, where the
distance to goal is geodesic on the navmesh. Episode sets are scored with
NE / SR / SPL / IR.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np

from .navmesh import NavMesh, shortest_path, DEFAULT_SNAP_CAP

TERMINATIONS = ("success", "timeout", "stuck", "out_of_bounds")


@dataclass(frozen=True)
class AgentState:
    position: np.ndarray  # on the navmesh
    heading: float  # radians, about the up axis
    step_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(3))
        if self.step_index < 0:
            raise ValueError("step_index must be >= 0")


@dataclass(frozen=True)
class Action:
    """Kinematic command; values are clamped to the configured bounds."""

    forward_velocity: float  # m/s, >= 0
    yaw_rate: float  # rad/s

    def clamped(self, v_max: float, w_max: float) -> "Action":
        return Action(
            forward_velocity=min(max(self.forward_velocity, 0.0), v_max),
            yaw_rate=min(max(self.yaw_rate, -w_max), w_max),
        )


@dataclass(frozen=True)
class RewardConfig:
    """Terminal bonus/penalty and shaping coefficients.

    Shaping: -alpha + beta * (d_prev - d_new) per non-terminal step;
    +r_succ on success; -r_fail on stuck / out-of-bounds termination.
    """

    r_succ: float = 10.0
    r_fail: float = 5.0
    alpha: float = 0.01
    beta: float = 1.0
    gamma: float = 0.99

    def __post_init__(self):
        if min(self.r_succ, self.r_fail, self.alpha, self.beta) <= 0:
            raise ValueError("reward coefficients must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")


@dataclass(frozen=True)
class EpisodeLimits:
    max_steps: int = 1000
    success_radius: float = 1.0  # m, geodesic
    stuck_window: int = 50  # steps
    stuck_displacement: float = 0.05  # m over the window
    v_max: float = 1.5  # m/s
    w_max: float = 1.5  # rad/s
    dt: float = 0.1  # s
    snap_cap: float = DEFAULT_SNAP_CAP


@dataclass
class Episode:
    states: list[AgentState]
    actions: list[Action]
    rewards: list[float]
    termination: str
    goal: np.ndarray
    optimal_length: float
    actual_length: float

    def __post_init__(self):
        if self.termination not in TERMINATIONS:
            raise ValueError(f"unknown termination {self.termination!r}")
        if not (len(self.rewards) == len(self.actions) == len(self.states) - 1):
            raise ValueError("need |rewards| = |actions| = |states| - 1")

    def to_dict(self) -> dict:
        return {
            "states": [
                {"position": s.position.tolist(), "heading": s.heading, "step_index": s.step_index}
                for s in self.states
            ],
            "actions": [asdict(a) for a in self.actions],
            "rewards": self.rewards,
            "termination": self.termination,
            "goal": np.asarray(self.goal).tolist(),
            "optimal_length": self.optimal_length,
            "actual_length": self.actual_length,
        }

    @staticmethod
    def from_dict(d: dict) -> "Episode":
        return Episode(
            states=[
                AgentState(np.array(s["position"]), s["heading"], s["step_index"])
                for s in d["states"]
            ],
            actions=[Action(**a) for a in d["actions"]],
            rewards=list(d["rewards"]),
            termination=d["termination"],
            goal=np.array(d["goal"]),
            optimal_length=d["optimal_length"],
            actual_length=d["actual_length"],
        )


class GoalDistanceField:
    """Geodesic distance-to-goal queries for a fixed goal.

    Dijkstra once from the goal over the portal graph; a query then costs
    one snap plus a minimum over the portal nodes of the agent's triangle.
    """

    def __init__(self, navmesh: NavMesh, goal):
        self.navmesh = navmesh
        g, tri_g, _ = navmesh.snap(goal)
        self.goal = g
        self.goal_tri = tri_g
        positions, node_edges, tri_nodes, _, _ = navmesh.portal_graph()
        dist = np.full(len(positions), np.inf)
        pq = []
        for n in tri_nodes[tri_g]:
            d = float(np.linalg.norm(positions[n] - g))
            if d < dist[n]:
                dist[n] = d
                heapq.heappush(pq, (d, n))
        while pq:
            d, u = heapq.heappop(pq)
            if d > dist[u]:
                continue
            for v, w in node_edges[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(pq, (nd, v))
        self._node_dist = dist
        self._positions = positions
        self._tri_nodes = tri_nodes

    def distance(self, point) -> float:
        p, tri, _ = self.navmesh.snap(point)
        best = math.inf
        if tri == self.goal_tri:
            best = float(np.linalg.norm(p - self.goal))
        for n in self._tri_nodes[tri]:
            d = self._node_dist[n]
            if math.isfinite(d):
                best = min(best, float(np.linalg.norm(p - self._positions[n])) + d)
        return best


def step(state: AgentState, action: Action, navmesh: NavMesh, limits: EpisodeLimits = EpisodeLimits()) -> AgentState:
    """One kinematic step: turn, move forward, snap to the navmesh.

    A move whose snapped result leaves the current region, or whose snap
    distance exceeds the cap, is blocked: position unchanged, step counted.
    """
    a = action.clamped(limits.v_max, limits.w_max)
    heading = state.heading + a.yaw_rate * limits.dt
    direction = np.array([math.cos(heading), math.sin(heading), 0.0])
    tentative = state.position + a.forward_velocity * limits.dt * direction
    q, tri, d = navmesh.snap(tentative)
    _, cur_tri, _ = navmesh.snap(state.position)
    blocked = d > limits.snap_cap or navmesh.regions[tri] != navmesh.regions[cur_tri]
    # a legitimate move must also stay continuous: reject teleport-like
    # snaps that jump farther than the commanded motion allows
    if not blocked:
        moved = float(np.linalg.norm(q - state.position))
        if moved > a.forward_velocity * limits.dt + 2.0 * limits.snap_cap:
            blocked = True
    position = state.position if blocked else q
    return AgentState(position=position, heading=heading, step_index=state.step_index + 1)


def reward(prev_d: float, new_d: float, outcome: str, cfg: RewardConfig) -> float:
    """Three-case shaping reward; distances are geodesic to the goal."""
    if outcome == "success":
        return cfg.r_succ
    if outcome in ("stuck", "out_of_bounds"):
        return -cfg.r_fail
    return -cfg.alpha + cfg.beta * (prev_d - new_d)


class HarnessError(Exception):
    """Raised when the policy callback itself fails; such episodes are
    excluded from metrics."""


def run_episode(
    navmesh: NavMesh,
    start,
    goal,
    policy: Callable[[dict], Action],
    limits: EpisodeLimits = EpisodeLimits(),
    reward_cfg: RewardConfig = RewardConfig(),
    initial_heading: float = 0.0,
) -> Episode:
    """Closed-loop rollout until success, timeout, stuck, or out-of-bounds.

    The observation dict passed to the policy carries position, heading,
    goal, goal_vector, and geodesic distance to goal.
    """
    s0, _, d0 = navmesh.snap(start)
    if d0 > limits.snap_cap:
        raise ValueError("start too far from the navmesh")
    dfield = GoalDistanceField(navmesh, goal)
    goal_pt = dfield.goal
    opt = shortest_path(navmesh, s0, goal_pt, snap_cap=limits.snap_cap).length

    states = [AgentState(position=s0, heading=initial_heading, step_index=0)]
    actions: list[Action] = []
    rewards: list[float] = []
    d_prev = dfield.distance(s0)

    if d_prev <= limits.success_radius:
        return Episode([states[0]], [], [], "success", goal_pt, opt, 0.0)

    termination = None
    while termination is None:
        st = states[-1]
        obs = {
            "position": st.position.copy(),
            "heading": st.heading,
            "goal": goal_pt.copy(),
            "goal_vector": goal_pt - st.position,
            "geodesic_distance": d_prev,
            "step_index": st.step_index,
        }
        try:
            act = policy(obs)
        except Exception as exc:
            raise HarnessError(f"policy callback failed: {exc}") from exc
        if not isinstance(act, Action):
            raise HarnessError(f"policy returned {type(act).__name__}, expected Action")
        nxt = step(st, act, navmesh, limits)
        d_new = dfield.distance(nxt.position)

        if d_new <= limits.success_radius:
            outcome = "success"
        elif nxt.step_index >= limits.max_steps:
            outcome = "timeout"
        elif nxt.step_index >= limits.stuck_window and _window_displacement(
            states + [nxt], limits.stuck_window
        ) < limits.stuck_displacement:
            outcome = "stuck"
        else:
            outcome = "step"

        states.append(nxt)
        actions.append(act)
        rewards.append(reward(d_prev, d_new, outcome, reward_cfg))
        d_prev = d_new
        if outcome != "step":
            termination = outcome

    p = float(np.linalg.norm(np.diff(np.array([s.position for s in states]), axis=0), axis=1).sum())
    return Episode(states, actions, rewards, termination, goal_pt, opt, p)


def _window_displacement(states: list[AgentState], window: int) -> float:
    """Net displacement over the trailing window of steps."""
    a = states[-1 - window].position
    b = states[-1].position
    return float(np.linalg.norm(b - a))


@dataclass(frozen=True)
class NavReport:
    ne: float  # mean final Euclidean distance to goal, meters
    sr: float
    spl: float
    ir: float
    n_episodes: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def evaluate(episodes: list[Episode]) -> NavReport:
    """NE / SR / SPL / IR over an episode set."""
    if not episodes:
        raise ValueError("no episodes to evaluate")
    ne = float(
        np.mean(
            [np.linalg.norm(ep.states[-1].position - np.asarray(ep.goal)) for ep in episodes]
        )
    )
    succ = [ep.termination == "success" for ep in episodes]
    spl_terms = [
        (ep.optimal_length / max(ep.actual_length, ep.optimal_length) if s and ep.optimal_length > 0 else (1.0 if s else 0.0))
        for ep, s in zip(episodes, succ)
    ]
    ir = sum(1 for ep in episodes if ep.termination in ("stuck", "out_of_bounds")) / len(episodes)
    return NavReport(
        ne=ne,
        sr=sum(succ) / len(episodes),
        spl=float(np.mean(spl_terms)),
        ir=ir,
        n_episodes=len(episodes),
    )


# ---------------------------------------------------------------------------
# Built-in policies


def expert_policy(navmesh: NavMesh, goal, limits: EpisodeLimits = EpisodeLimits()):
    """Waypoint follower along the precomputed shortest path: turn toward
    the next waypoint, drive forward once roughly facing it."""
    state = {"path": None, "idx": 1}

    def policy(obs) -> Action:
        if state["path"] is None:
            state["path"] = shortest_path(navmesh, obs["position"], goal, snap_cap=limits.snap_cap).waypoints
        wps = state["path"]
        pos = obs["position"]
        while state["idx"] < len(wps) - 1 and np.linalg.norm(wps[state["idx"]] - pos) < 0.3:
            state["idx"] += 1
        target = wps[min(state["idx"], len(wps) - 1)]
        delta = target - pos
        desired = math.atan2(delta[1], delta[0])
        err = (desired - obs["heading"] + math.pi) % (2.0 * math.pi) - math.pi
        yaw = max(-limits.w_max, min(limits.w_max, err / limits.dt))
        if abs(err) > 0.3:
            return Action(0.0, yaw)
        v = min(limits.v_max, float(np.linalg.norm(delta)) / limits.dt)
        return Action(v, yaw)

    return policy


def random_policy(seed: int, limits: EpisodeLimits = EpisodeLimits()):
    rng = np.random.default_rng(seed)

    def policy(obs) -> Action:
        return Action(
            forward_velocity=float(rng.uniform(0.0, limits.v_max)),
            yaw_rate=float(rng.uniform(-limits.w_max, limits.w_max)),
        )

    return policy


def zero_policy():
    def policy(obs) -> Action:
        return Action(0.0, 0.0)

    return policy


# ---------------------------------------------------------------------------
# Episode log IO (JSONL, one episode per line)


def write_episodes_jsonl(path, episodes: list[Episode]) -> None:
    with open(path, "w") as f:
        for ep in episodes:
            f.write(json.dumps(ep.to_dict()) + "\n")


def read_episodes_jsonl(path) -> list[Episode]:
    out = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(Episode.from_dict(json.loads(line)))
    return out


# ---------------------------------------------------------------------------
# External policy bridge: one JSON observation per line on the child's
# stdin, one JSON action {"forward_velocity": v, "yaw_rate": w} per line
# on its stdout.


class ExternalPolicy:
    def __init__(self, argv: list[str]):
        import subprocess

        self.proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )

    def __call__(self, obs: dict) -> Action:
        msg = {
            "position": obs["position"].tolist(),
            "heading": obs["heading"],
            "goal": obs["goal"].tolist(),
            "goal_vector": obs["goal_vector"].tolist(),
            "geodesic_distance": obs["geodesic_distance"],
            "step_index": obs["step_index"],
        }
        self.proc.stdin.write(json.dumps(msg) + "\n")
        self.proc.stdin.flush()
        line = self.proc.stdout.readline()
        if not line:
            raise RuntimeError("external policy closed its output stream")
        d = json.loads(line)
        return Action(float(d["forward_velocity"]), float(d["yaw_rate"]))

    def close(self):
        if self.proc.stdin:
            self.proc.stdin.close()
        self.proc.wait(timeout=10)
