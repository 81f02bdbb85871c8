import sys
import textwrap

import numpy as np
import pytest

from wanderkit.episode import (
    Action,
    AgentState,
    EpisodeLimits,
    ExternalPolicy,
    GoalDistanceField,
    HarnessError,
    RewardConfig,
    evaluate,
    expert_policy,
    random_policy,
    read_episodes_jsonl,
    reward,
    run_episode,
    step,
    write_episodes_jsonl,
    zero_policy,
)
from wanderkit.navmesh import bake_navmesh

from helpers import grid_floor, u_corridor_mesh


@pytest.fixture(scope="module")
def flat_nav():
    return bake_navmesh(grid_floor(), min_region_faces=1)


@pytest.fixture(scope="module")
def u_nav():
    return bake_navmesh(u_corridor_mesh(), min_region_faces=1)


START = np.array([1.0, 1.0, 0.0])
GOAL = np.array([8.5, 8.5, 0.0])


class TestAction:
    def test_clamping(self):
        a = Action(5.0, -9.0).clamped(1.5, 1.5)
        assert a.forward_velocity == 1.5 and a.yaw_rate == -1.5

    def test_negative_velocity_clamped_to_zero(self):
        assert Action(-1.0, 0.0).clamped(1.5, 1.5).forward_velocity == 0.0


class TestReward:
    CFG = RewardConfig()

    def test_success_bonus(self):
        assert reward(3.0, 0.5, "success", self.CFG) == 10.0

    def test_failure_penalty(self):
        assert reward(3.0, 3.0, "stuck", self.CFG) == -5.0
        assert reward(3.0, 3.0, "out_of_bounds", self.CFG) == -5.0

    def test_step_shaping(self):
        # -alpha + beta * progress
        assert reward(3.0, 2.6, "step", self.CFG) == pytest.approx(-0.01 + 0.4)
        assert reward(2.0, 2.5, "step", self.CFG) == pytest.approx(-0.01 - 0.5)

    def test_timeout_gets_shaping_not_penalty(self):
        assert reward(3.0, 3.0, "timeout", self.CFG) == pytest.approx(-0.01)


class TestStep:
    def test_forward_motion_follows_heading(self, flat_nav):
        st = AgentState(position=np.array([5.0, 5.0, 0.0]), heading=0.0, step_index=0)
        nxt = step(st, Action(1.0, 0.0), flat_nav)
        assert np.allclose(nxt.position, [5.1, 5.0, 0.0])
        assert nxt.step_index == 1

    def test_yaw_applied_before_translation(self, flat_nav):
        st = AgentState(position=np.array([5.0, 5.0, 0.0]), heading=0.0, step_index=0)
        limits = EpisodeLimits(w_max=100.0)  # +pi/2 of yaw within a single dt
        nxt = step(st, Action(1.0, np.pi / 2 / limits.dt), flat_nav, limits)
        assert np.allclose(nxt.position, [5.0, 5.1, 0.0], atol=1e-9)

    def test_agent_cannot_leave_the_mesh(self, flat_nav):
        st = AgentState(position=np.array([0.3, 5.0, 0.0]), heading=np.pi, step_index=0)
        for _ in range(30):
            st = step(st, Action(1.5, 0.0), flat_nav)
        assert st.position[0] >= 0.0 - 1e-9


class TestGoalDistanceField:
    def test_zero_at_goal_and_monotone_cue(self, u_nav):
        f = GoalDistanceField(u_nav, GOAL)
        assert f.distance(GOAL) < 0.5
        near = f.distance([7.5, 7.5, 0.0])
        far = f.distance([5.0, 2.0, 0.0])
        assert far > near > 0.0

    def test_respects_the_wall(self, u_nav):
        f = GoalDistanceField(u_nav, [5.0, 8.0, 0.0])
        d = f.distance([5.0, 2.0, 0.0])
        assert d > 8.0  # Euclidean is 6; the detour is forced


class TestRunEpisode:
    def test_expert_reaches_goal(self, u_nav):
        ep = run_episode(u_nav, START, GOAL, expert_policy(u_nav, GOAL))
        assert ep.termination == "success"
        assert ep.rewards[-1] == 10.0
        assert np.linalg.norm(ep.states[-1].position - ep.goal) <= 1.0
        # stops inside the success radius, so it may undercut the full
        # start-to-goal optimum by at most that radius
        assert ep.actual_length >= ep.optimal_length - 1.0 - 1e-6

    def test_zero_policy_stuck_at_window(self, flat_nav):
        ep = run_episode(flat_nav, START, GOAL, zero_policy())
        assert ep.termination == "stuck"
        assert ep.states[-1].step_index == 50
        assert ep.rewards[-1] == -5.0

    def test_timeout_and_telescoping_shaping_sum(self, flat_nav):
        limits = EpisodeLimits(max_steps=60, stuck_window=10_000)
        circling = lambda obs: Action(0.5, 1.0)
        ep = run_episode(flat_nav, START, GOAL, circling, limits=limits)
        assert ep.termination == "timeout"
        assert len(ep.rewards) == 60
        f = GoalDistanceField(flat_nav, GOAL)
        d0 = f.distance(ep.states[0].position)
        dT = f.distance(ep.states[-1].position)
        expected = -0.01 * 60 + 1.0 * (d0 - dT)
        assert sum(ep.rewards) == pytest.approx(expected, abs=1e-9)

    def test_immediate_success_when_start_near_goal(self, flat_nav):
        ep = run_episode(flat_nav, GOAL + [0.2, 0.0, 0.0], GOAL, zero_policy())
        assert ep.termination == "success"
        assert len(ep.actions) == 0

    def test_step_cap_never_exceeded(self, flat_nav):
        limits = EpisodeLimits(max_steps=25, stuck_window=10_000)
        ep = run_episode(flat_nav, START, GOAL, random_policy(0), limits=limits)
        assert len(ep.states) <= 26

    def test_bad_policy_raises_harness_error(self, flat_nav):
        with pytest.raises(HarnessError):
            run_episode(flat_nav, START, GOAL, lambda obs: "north")
        def boom(obs):
            raise RuntimeError("policy crashed")
        with pytest.raises(HarnessError):
            run_episode(flat_nav, START, GOAL, boom)

    def test_start_off_scene_rejected(self, flat_nav):
        with pytest.raises(ValueError):
            run_episode(flat_nav, [500.0, 0.0, 0.0], GOAL, zero_policy())


class TestEvaluate:
    def _episodes(self, flat_nav):
        eps = [run_episode(flat_nav, START, GOAL, expert_policy(flat_nav, GOAL))]
        eps.append(run_episode(flat_nav, START, GOAL, zero_policy()))
        return eps

    def test_metric_ranges_and_consistency(self, flat_nav):
        rep = evaluate(self._episodes(flat_nav))
        assert rep.n_episodes == 2
        assert rep.sr == 0.5 and rep.ir == 0.5
        assert 0.0 <= rep.spl <= rep.sr  # per-episode SPL is capped by success
        assert rep.ne > 0.0

    def test_expert_spl_is_one(self, flat_nav):
        rep = evaluate([run_episode(flat_nav, START, GOAL, expert_policy(flat_nav, GOAL))])
        assert rep.sr == 1.0
        assert rep.spl == pytest.approx(1.0, abs=0.05)
        assert rep.ir == 0.0

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            evaluate([])


class TestEpisodeIO:
    def test_jsonl_round_trip(self, flat_nav, tmp_path):
        eps = [
            run_episode(flat_nav, START, GOAL, expert_policy(flat_nav, GOAL)),
            run_episode(flat_nav, START, GOAL, zero_policy()),
        ]
        p = tmp_path / "eps.jsonl"
        write_episodes_jsonl(p, eps)
        back = read_episodes_jsonl(p)
        assert len(back) == 2
        for a, b in zip(eps, back):
            assert a.termination == b.termination
            assert a.rewards == pytest.approx(b.rewards)
            assert np.allclose(a.goal, b.goal)
            assert np.allclose(
                [s.position for s in a.states], [s.position for s in b.states]
            )
            assert a.optimal_length == pytest.approx(b.optimal_length)


GREEDY_CHILD = textwrap.dedent(
    """
    import json, math, sys
    for line in sys.stdin:
        obs = json.loads(line)
        gx, gy = obs["goal_vector"][0], obs["goal_vector"][1]
        err = math.atan2(gy, gx) - obs["heading"]
        err = math.atan2(math.sin(err), math.cos(err))
        v = 1.0 if abs(err) < 0.3 else 0.0
        print(json.dumps({"forward_velocity": v, "yaw_rate": 2.0 * err}))
        sys.stdout.flush()
    """
)


class TestExternalPolicy:
    def test_subprocess_policy_runs_episode(self, flat_nav, tmp_path):
        child = tmp_path / "greedy.py"
        child.write_text(GREEDY_CHILD)
        pol = ExternalPolicy([sys.executable, str(child)])
        try:
            ep = run_episode(flat_nav, START, GOAL, pol)
        finally:
            pol.close()
        assert ep.termination == "success"
