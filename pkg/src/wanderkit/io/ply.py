"""PLY reader/writer for point clouds and Gaussian sets.

Supports ASCII and binary little-endian PLY with float x/y/z, optional
uchar red/green/blue, and optional float scale/opacity. Unrecognized
properties are preserved verbatim and re-emitted on write. Big-endian
files are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataFormatError
from ..meshing import PointCloud
from ..splat_init import GaussianSet

_PLY_TYPES = {
    "char": "i1",
    "int8": "i1",
    "uchar": "u1",
    "uint8": "u1",
    "short": "i2",
    "int16": "i2",
    "ushort": "u2",
    "uint16": "u2",
    "int": "i4",
    "int32": "i4",
    "uint": "u4",
    "uint32": "u4",
    "float": "f4",
    "float32": "f4",
    "double": "f8",
    "float64": "f8",
}
_INV_TYPES = {"i1": "char", "u1": "uchar", "i2": "short", "u2": "ushort",
              "i4": "int", "u4": "uint", "f4": "float", "f8": "double"}


@dataclass
class PlyVertexData:
    """Raw per-vertex property arrays in header order."""

    names: list[str]
    arrays: dict[str, np.ndarray]
    fmt: str  # "ascii" or "binary_little_endian"

    @property
    def count(self) -> int:
        return len(next(iter(self.arrays.values()))) if self.arrays else 0


def _parse_header(f):
    magic = f.readline()
    if magic.strip() != b"ply":
        raise DataFormatError("not a PLY file (missing 'ply' magic)")
    fmt = None
    elements = []  # (name, count, [(prop_name, dtype_code)])
    while True:
        line = f.readline()
        if not line:
            raise DataFormatError("unexpected end of PLY header")
        tokens = line.decode("ascii", "replace").split()
        if not tokens:
            continue
        if tokens[0] == "comment":
            continue
        if tokens[0] == "format":
            if tokens[1] == "binary_big_endian":
                raise DataFormatError("big-endian PLY is not supported; re-export as little-endian")
            if tokens[1] not in ("ascii", "binary_little_endian"):
                raise DataFormatError(f"unknown PLY format {tokens[1]!r}")
            fmt = tokens[1]
        elif tokens[0] == "element":
            elements.append((tokens[1], int(tokens[2]), []))
        elif tokens[0] == "property":
            if tokens[1] == "list":
                raise DataFormatError("list properties are not supported in vertex-only PLY")
            if tokens[1] not in _PLY_TYPES:
                raise DataFormatError(f"unknown PLY property type {tokens[1]!r}")
            elements[-1][2].append((tokens[2], _PLY_TYPES[tokens[1]]))
        elif tokens[0] == "end_header":
            break
        else:
            raise DataFormatError(f"malformed PLY header line: {line!r}")
    if fmt is None:
        raise DataFormatError("PLY header has no format line")
    return fmt, elements


def read_ply_raw(path) -> PlyVertexData:
    with open(path, "rb") as f:
        fmt, elements = _parse_header(f)
        vert = next((e for e in elements if e[0] == "vertex"), None)
        if vert is None:
            raise DataFormatError("PLY file has no vertex element")
        _, count, props = vert
        dtype = np.dtype([(n, "<" + c) for n, c in props])
        if fmt == "binary_little_endian":
            raw = f.read(count * dtype.itemsize)
            got = len(raw) // dtype.itemsize
            if got < count:
                raise DataFormatError(f"truncated PLY body: expected {count} vertices, found {got}")
            data = np.frombuffer(raw, dtype=dtype, count=count)
        else:
            rows = []
            for _ in range(count):
                line = f.readline()
                if not line.strip():
                    raise DataFormatError(f"truncated ASCII PLY body: expected {count} vertices, found {len(rows)}")
                tokens = line.split()
                if len(tokens) != len(props):
                    raise DataFormatError(f"ASCII PLY row has {len(tokens)} values, expected {len(props)}")
                rows.append(
                    tuple(
                        float(t) if code.startswith("f") else int(t)
                        for t, (_, code) in zip(tokens, props)
                    )
                )
            data = np.array(rows, dtype=dtype)
        arrays = {n: np.ascontiguousarray(data[n]) for n, _ in props}
        return PlyVertexData([n for n, _ in props], arrays, fmt)


def write_ply_raw(path, data: PlyVertexData) -> None:
    n = data.count
    dtype = np.dtype([(name, "<" + data.arrays[name].dtype.str[-2:]) for name in data.names])
    with open(path, "wb") as f:
        f.write(b"ply\n")
        f.write(f"format {data.fmt} 1.0\n".encode())
        f.write(f"element vertex {n}\n".encode())
        for name in data.names:
            code = data.arrays[name].dtype.str[-2:]
            f.write(f"property {_INV_TYPES[code]} {name}\n".encode())
        f.write(b"end_header\n")
        rec = np.empty(n, dtype=dtype)
        for name in data.names:
            rec[name] = data.arrays[name]
        if data.fmt == "binary_little_endian":
            f.write(rec.tobytes())
        else:
            for row in rec.tolist():
                f.write(
                    (" ".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) + "\n").encode()
                )


def read_ply(path) -> PointCloud:
    """Load a point cloud; extra properties are kept on the .raw attribute
    pattern via read_ply_raw for lossless rewrites."""
    raw = read_ply_raw(path)
    for axis in ("x", "y", "z"):
        if axis not in raw.arrays:
            raise DataFormatError(f"PLY vertex element lacks property {axis!r}")
    pts = np.column_stack([raw.arrays["x"], raw.arrays["y"], raw.arrays["z"]]).astype(float)
    colors = None
    if all(c in raw.arrays for c in ("red", "green", "blue")):
        colors = np.column_stack([raw.arrays["red"], raw.arrays["green"], raw.arrays["blue"]])
    return PointCloud(pts, colors)


def write_ply(path, cloud: PointCloud, binary: bool = True) -> None:
    names = ["x", "y", "z"]
    arrays = {
        "x": cloud.points[:, 0].astype("<f4"),
        "y": cloud.points[:, 1].astype("<f4"),
        "z": cloud.points[:, 2].astype("<f4"),
    }
    if cloud.colors is not None:
        names += ["red", "green", "blue"]
        cols = np.asarray(cloud.colors)
        for i, c in enumerate(("red", "green", "blue")):
            arrays[c] = cols[:, i].astype("u1")
    write_ply_raw(path, PlyVertexData(names, arrays, "binary_little_endian" if binary else "ascii"))


def write_ply_double(path, cloud: PointCloud, binary: bool = True) -> None:
    """Like write_ply but with float64 coordinates (bit-lossless round trip)."""
    names = ["x", "y", "z"]
    arrays = {
        "x": cloud.points[:, 0].astype("<f8"),
        "y": cloud.points[:, 1].astype("<f8"),
        "z": cloud.points[:, 2].astype("<f8"),
    }
    if cloud.colors is not None:
        names += ["red", "green", "blue"]
        cols = np.asarray(cloud.colors)
        for i, c in enumerate(("red", "green", "blue")):
            arrays[c] = cols[:, i].astype("u1")
    write_ply_raw(path, PlyVertexData(names, arrays, "binary_little_endian" if binary else "ascii"))


def read_gaussians_ply(path) -> GaussianSet:
    raw = read_ply_raw(path)
    needed = ("x", "y", "z", "scale", "opacity", "red", "green", "blue")
    for p in needed:
        if p not in raw.arrays:
            raise DataFormatError(f"Gaussian PLY lacks property {p!r}")
    centers = np.column_stack([raw.arrays["x"], raw.arrays["y"], raw.arrays["z"]]).astype(float)
    colors = np.column_stack([raw.arrays["red"], raw.arrays["green"], raw.arrays["blue"]]).astype(float) / 255.0
    # float32 storage can nudge an opacity of exactly 0.99 past the cap
    opacity = np.minimum(raw.arrays["opacity"].astype(float), 0.99)
    return GaussianSet(
        centers,
        raw.arrays["scale"].astype(float),
        opacity,
        colors,
    )


def write_gaussians_ply(path, gs: GaussianSet, binary: bool = True) -> None:
    names = ["x", "y", "z", "scale", "opacity", "red", "green", "blue"]
    cols = np.clip(np.round(gs.colors * 255.0), 0, 255).astype("u1")
    arrays = {
        "x": gs.centers[:, 0].astype("<f4"),
        "y": gs.centers[:, 1].astype("<f4"),
        "z": gs.centers[:, 2].astype("<f4"),
        "scale": gs.scales.astype("<f4"),
        "opacity": gs.opacities.astype("<f4"),
        "red": cols[:, 0],
        "green": cols[:, 1],
        "blue": cols[:, 2],
    }
    write_ply_raw(path, PlyVertexData(names, arrays, "binary_little_endian" if binary else "ascii"))
