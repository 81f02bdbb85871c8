"""Walkthrough: Gaussian initialization and depth-target rendering.

Initializes Gaussians from a synthetic wall cloud (KNN scales, opacity
inversely proportional to volumetric density), then projects them to a
camera to produce a depth target.
"""
import numpy as np

from wanderkit import (
    CameraIntrinsics,
    PointCloud,
    Pose,
    init_gaussians,
    render_depth,
)

rng = np.random.default_rng(3)

# a 4x3 m wall at z=5, densely sampled, plus a sparse foreground patch at z=3
xs, ys = np.meshgrid(np.linspace(-2, 2, 80), np.linspace(-1.5, 1.5, 60))
wall = np.column_stack([xs.ravel(), ys.ravel(), np.full(xs.size, 5.0)])
patch = np.column_stack([
    rng.uniform(-0.5, 0.5, 40), rng.uniform(-0.5, 0.5, 40), np.full(40, 3.0)
])
patch[0] = (0.0, 0.0, 3.0)  # one point straight down the optical axis
cloud = PointCloud(np.vstack([wall, patch]))

gs = init_gaussians(cloud, target_count=len(cloud), seed=0, k=3)
print(f"{len(gs)} gaussians")
print(f"scale  range [{gs.scales.min():.4f}, {gs.scales.max():.4f}] m")
print(f"opacity range [{gs.opacities.min():.4f}, {gs.opacities.max():.4f}] "
      "(sparse regions get lower opacity)")

cam = CameraIntrinsics.from_fov(70.0, 320, 240)
pose = Pose(np.eye(3), np.zeros(3))  # camera at the origin looking down +z
dm = render_depth(gs, pose, cam, splat_radius=1)

valid = dm.depth[np.isfinite(dm.depth) & (dm.depth != dm.sentinel)]
print(f"depth map {dm.width}x{dm.height}: {valid.size} valid pixels, "
      f"range [{valid.min():.3f}, {valid.max():.3f}] m")
cy, cx = int(cam.cy), int(cam.cx)
print(f"principal-pixel depth: {dm.depth[cy, cx]:.3f} m (foreground patch wins over the wall)")
