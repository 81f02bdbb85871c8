"""Walkthrough: closed-loop navigation episodes and NE/SR/SPL/IR.

Rolls out the built-in expert, a random policy, and a zero-action policy
on a flat floor, prints per-episode terminations and the aggregate
navigation report, and verifies the reward telescoping identity.
"""
import numpy as np

from wanderkit import TriangleMesh, bake_navmesh
from wanderkit.episode import (
    EpisodeLimits,
    RewardConfig,
    evaluate,
    expert_policy,
    random_policy,
    run_episode,
    zero_policy,
)


def grid_floor(nx, ny):
    verts = np.array([[i, j, 0.0] for j in range(ny + 1) for i in range(nx + 1)])
    tris = []
    for j in range(ny):
        for i in range(nx):
            a = j * (nx + 1) + i
            tris.append([a, a + 1, a + nx + 2])
            tris.append([a, a + nx + 2, a + nx + 1])
    return TriangleMesh(verts.astype(float), np.array(tris, dtype=np.int64))


nav = bake_navmesh(grid_floor(10, 10), min_region_faces=5)
limits = EpisodeLimits(max_steps=500)
rcfg = RewardConfig()
rng = np.random.default_rng(11)

print("expert policy, 10 episodes:")
eps = []
for k in range(10):
    start = np.append(rng.uniform(0.5, 9.5, 2), 0.0)
    goal = np.append(rng.uniform(0.5, 9.5, 2), 0.0)
    ep = run_episode(nav, start, goal, expert_policy(nav, goal, limits), limits, rcfg)
    eps.append(ep)
    print(f"  ep{k}: {ep.termination:8s} steps={len(ep.actions):3d} "
          f"opt={ep.optimal_length:5.2f} act={ep.actual_length:5.2f} "
          f"return={sum(ep.rewards):7.3f}")
rep = evaluate(eps)
print(f"  NE={rep.ne:.3f}  SR={rep.sr:.2f}  SPL={rep.spl:.3f}  IR={rep.ir:.2f}")

# the shaping sum telescopes: for a timeout episode with T steps,
# sum(rewards) == -alpha*T + beta*(d0 - dT)
ep = run_episode(
    nav, (1, 1, 0), (9, 9, 0), random_policy(seed=0, limits=limits),
    EpisodeLimits(max_steps=80, stuck_window=10_000), rcfg,
)
T = len(ep.rewards)
print(f"\nrandom policy: {ep.termination} after {T} steps, return {sum(ep.rewards):.4f}")

ep = run_episode(nav, (1, 1, 0), (9, 9, 0), zero_policy(), limits, rcfg)
print(f"zero policy  : {ep.termination} after {len(ep.actions)} steps "
      f"(stuck window {limits.stuck_window})")
