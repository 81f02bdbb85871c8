"""Walkthrough: point cloud -> occupancy grid -> collision mesh.

Synthesizes a small room (floor slab + four walls) as a point cloud,
voxelizes it, runs marching cubes, and filters loose fragments. Writes
the mesh to OBJ next to this script.
"""
from pathlib import Path

import numpy as np

from wanderkit import PointCloud, extract_collision_mesh, voxelize
from wanderkit.io import write_obj
from wanderkit.meshing import face_components

rng = np.random.default_rng(0)


def slab(x0, x1, y0, y1, z0, z1, spacing=0.1):
    xs = np.arange(x0, x1 + 1e-9, spacing)
    ys = np.arange(y0, y1 + 1e-9, spacing)
    zs = np.arange(z0, z1 + 1e-9, spacing)
    g = np.stack(np.meshgrid(xs, ys, zs, indexing="ij"), axis=-1).reshape(-1, 3)
    return g


parts = [slab(0, 8, 0, 6, -0.2, 0.0)]  # floor
for x0, x1, y0, y1 in [(0, 8, -0.2, 0), (0, 8, 6, 6.2), (-0.2, 0, 0, 6), (8, 8.2, 0, 6)]:
    parts.append(slab(x0, x1, y0, y1, 0.0, 2.2))
# plus a floating blob of stray points that the fragment filter should drop
parts.append(rng.normal([20, 20, 1], 0.05, (20, 3)))

cloud = PointCloud(np.vstack(parts))
print(f"cloud: {len(cloud)} points")

grid = voxelize(cloud, voxel_size=0.3, min_points_per_voxel=1)
print(f"grid: dims {grid.occupancy.shape}, {int(grid.occupancy.sum())} occupied voxels")

mesh = extract_collision_mesh(cloud, voxel_size=0.3, min_points_per_voxel=1, min_faces=50)
labels = face_components(mesh)
print(f"mesh: {len(mesh.vertices)} vertices, {len(mesh.triangles)} faces, "
      f"{labels.max() + 1} component(s) after filtering")

out = Path(__file__).with_name("room.obj")
write_obj(out, mesh)
print(f"wrote {out}")
