"""Scene manifest: a JSON document tying the per-scene artifacts together.

Relative paths resolve against the manifest's directory. Loading verifies
that every referenced path exists and reports all missing paths at once.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataFormatError

FORMAT_VERSION = 1
SPLITS = ("train", "extrapolation")

_PATH_FIELDS = (
    "point_cloud",
    "gt_trajectory",
    "mesh",
    "navmesh",
    "gaussians",
    "images_dir",
    "depth_dir",
)


@dataclass
class SceneManifest:
    scene_id: str
    point_cloud: Path | None = None
    gt_trajectory: Path | None = None
    predicted_trajectories: dict[str, Path] = field(default_factory=dict)
    mesh: Path | None = None
    navmesh: Path | None = None
    gaussians: Path | None = None
    images_dir: Path | None = None
    depth_dir: Path | None = None
    split: str = "train"
    units: str = "meters"

    def __post_init__(self):
        if self.split not in SPLITS:
            raise DataFormatError(f"split must be one of {SPLITS}, got {self.split!r}")
        if self.units != "meters":
            raise DataFormatError("units are fixed to 'meters'")


def load_manifest(path) -> SceneManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataFormatError(f"{path}: manifest must be a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DataFormatError(f"{path}: unsupported format_version {version}")
    if "scene_id" not in doc:
        raise DataFormatError(f"{path}: manifest lacks scene_id")

    base = path.parent

    def resolve(p):
        return (base / p).resolve() if p is not None else None

    m = SceneManifest(
        scene_id=doc["scene_id"],
        predicted_trajectories={
            k: resolve(v) for k, v in doc.get("predicted_trajectories", {}).items()
        },
        split=doc.get("split", "train"),
        units=doc.get("units", "meters"),
        **{f: resolve(doc.get(f)) for f in _PATH_FIELDS},
    )
    missing = [
        str(p)
        for p in [getattr(m, f) for f in _PATH_FIELDS] + list(m.predicted_trajectories.values())
        if p is not None and not p.exists()
    ]
    if missing:
        raise DataFormatError(f"{path}: missing referenced paths: " + ", ".join(sorted(missing)))
    return m


def save_manifest(path, m: SceneManifest) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "scene_id": m.scene_id,
        "split": m.split,
        "units": m.units,
        "predicted_trajectories": {k: str(v) for k, v in m.predicted_trajectories.items()},
    }
    for f in _PATH_FIELDS:
        v = getattr(m, f)
        if v is not None:
            doc[f] = str(v)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
