"""NavMesh JSON serialization: vertices, walkable triangles, adjacency,
regions, and the source-mesh face indices each triangle was baked from."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DataFormatError
from ..navmesh import NavMesh, Path as NavPath

FORMAT_VERSION = 1


def save_navmesh(path, nm: NavMesh) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "up_axis": nm.up_axis.tolist(),
        "vertices": nm.vertices.tolist(),
        "triangles": nm.triangles.tolist(),
        "adjacency": [list(a) for a in nm.adjacency],
        "regions": nm.regions.tolist(),
        "source_face_ids": nm.source_face_ids.tolist(),
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def load_navmesh(path) -> NavMesh:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid JSON: {exc}") from exc
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataFormatError(f"{path}: unsupported navmesh format_version")
    return NavMesh(
        vertices=np.array(doc["vertices"], dtype=float).reshape(-1, 3),
        triangles=np.array(doc["triangles"], dtype=np.int64).reshape(-1, 3),
        adjacency=tuple(tuple(a) for a in doc["adjacency"]),
        regions=np.array(doc["regions"], dtype=np.int64),
        source_face_ids=np.array(doc["source_face_ids"], dtype=np.int64),
        up_axis=np.array(doc["up_axis"], dtype=float),
    )


def save_path(path, p: NavPath) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "waypoints": p.waypoints.tolist(),
        "length": p.length,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_path(path) -> NavPath:
    doc = json.loads(Path(path).read_text())
    return NavPath(np.array(doc["waypoints"], dtype=float).reshape(-1, 3), float(doc["length"]))
