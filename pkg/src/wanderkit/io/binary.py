"""Binary side formats: depth maps and occupancy-grid debug dumps.

Depth map (.wdepth):
    bytes 0..3   magic b"WDPT"
    bytes 4..7   uint32 LE width
    bytes 8..11  uint32 LE height
    bytes 12..15 float32 LE no-data sentinel
    then height*width float32 LE depths, row-major.

Grid dump (.wgrid):
    bytes 0..3   magic b"WGRD"
    bytes 4..7   uint32 LE format version (1)
    bytes 8..19  3 x uint32 LE dims (nx, ny, nz)
    bytes 20..43 3 x float64 LE origin (x, y, z)
    bytes 44..51 float64 LE voxel size
    then ceil(nx*ny*nz / 8) bytes of occupancy bits, C-order, LSB-first.
"""
from __future__ import annotations

import struct

import numpy as np

from ..errors import DataFormatError
from ..meshing import OccupancyGrid
from ..splat_init import DepthMap

DEPTH_MAGIC = b"WDPT"
GRID_MAGIC = b"WGRD"


def write_depth(path, dm: DepthMap) -> None:
    with open(path, "wb") as f:
        f.write(DEPTH_MAGIC)
        f.write(struct.pack("<IIf", dm.width, dm.height, dm.sentinel))
        f.write(dm.depth.astype("<f4").tobytes())


def read_depth(path) -> DepthMap:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != DEPTH_MAGIC:
        raise DataFormatError(f"{path}: bad depth magic {data[:4]!r}")
    width, height, sentinel = struct.unpack("<IIf", data[4:16])
    need = width * height * 4
    if len(data) - 16 < need:
        raise DataFormatError(f"{path}: truncated depth body")
    depth = np.frombuffer(data[16 : 16 + need], dtype="<f4").reshape(height, width)
    return DepthMap(depth.copy(), sentinel=float(sentinel))


def write_grid(path, grid: OccupancyGrid) -> None:
    occ = grid.occupancy
    with open(path, "wb") as f:
        f.write(GRID_MAGIC)
        f.write(struct.pack("<I", 1))
        f.write(struct.pack("<III", *occ.shape))
        f.write(struct.pack("<ddd", *grid.origin))
        f.write(struct.pack("<d", grid.voxel_size))
        f.write(np.packbits(occ.reshape(-1), bitorder="little").tobytes())


def read_grid(path) -> OccupancyGrid:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != GRID_MAGIC:
        raise DataFormatError(f"{path}: bad grid magic {data[:4]!r}")
    (version,) = struct.unpack("<I", data[4:8])
    if version != 1:
        raise DataFormatError(f"{path}: unsupported grid version {version}")
    nx, ny, nz = struct.unpack("<III", data[8:20])
    origin = struct.unpack("<ddd", data[20:44])
    (voxel,) = struct.unpack("<d", data[44:52])
    n = nx * ny * nz
    bits = np.frombuffer(data[52:], dtype=np.uint8)
    occ = np.unpackbits(bits, count=n, bitorder="little").astype(bool).reshape(nx, ny, nz)
    return OccupancyGrid(np.array(origin), voxel, occ)
