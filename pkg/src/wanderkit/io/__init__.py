"""Readers and writers for all interchange formats."""
from .binary import read_depth, read_grid, write_depth, write_grid
from .image_io import read_image, write_pgm, write_ppm
from .manifest import SceneManifest, load_manifest, save_manifest
from .navmesh_json import load_navmesh, load_path, save_navmesh, save_path
from .obj import read_obj, write_obj
from .ply import (
    read_gaussians_ply,
    read_ply,
    read_ply_raw,
    write_gaussians_ply,
    write_ply,
    write_ply_double,
    write_ply_raw,
)
from .tum import TumLoadReport, read_tum, read_tum_report, write_tum

__all__ = [
    "SceneManifest",
    "TumLoadReport",
    "load_manifest",
    "load_navmesh",
    "load_path",
    "read_depth",
    "read_gaussians_ply",
    "read_grid",
    "read_image",
    "read_obj",
    "read_ply",
    "read_ply_raw",
    "read_tum",
    "read_tum_report",
    "save_manifest",
    "save_navmesh",
    "save_path",
    "write_depth",
    "write_gaussians_ply",
    "write_grid",
    "write_obj",
    "write_pgm",
    "write_ply",
    "write_ply_double",
    "write_ply_raw",
    "write_ppm",
    "write_tum",
]
