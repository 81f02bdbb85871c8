"""OBJ mesh reader/writer limited to v/f records.

Polygonal faces are fan-triangulated; `v/vt/vn` index syntax is accepted
(only the vertex index is used). Vertices are written with 17 significant
digits for lossless round trips.
"""
from __future__ import annotations

import numpy as np

from ..errors import DataFormatError
from ..meshing import TriangleMesh


def read_obj(path) -> TriangleMesh:
    vertices: list[tuple[float, float, float]] = []
    triangles: list[tuple[int, int, int]] = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            tokens = line.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            if tokens[0] == "v":
                if len(tokens) < 4:
                    raise DataFormatError(f"{path}:{lineno}: vertex needs 3 coordinates")
                vertices.append(tuple(float(t) for t in tokens[1:4]))
            elif tokens[0] == "f":
                if len(tokens) < 4:
                    raise DataFormatError(f"{path}:{lineno}: face needs at least 3 vertices")
                try:
                    idx = [int(t.split("/")[0]) for t in tokens[1:]]
                except ValueError as exc:
                    raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
                idx = [i - 1 if i > 0 else len(vertices) + i for i in idx]
                if any(i < 0 or i >= len(vertices) for i in idx):
                    raise DataFormatError(f"{path}:{lineno}: face index out of range")
                for k in range(1, len(idx) - 1):
                    triangles.append((idx[0], idx[k], idx[k + 1]))
            # other record types (vn, vt, o, g, usemtl, s) are ignored
    return TriangleMesh(
        np.array(vertices, dtype=float).reshape(-1, 3),
        np.array(triangles, dtype=np.int64).reshape(-1, 3),
    )


def write_obj(path, mesh: TriangleMesh) -> None:
    with open(path, "w") as f:
        for v in mesh.vertices:
            f.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for t in mesh.triangles:
            f.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
