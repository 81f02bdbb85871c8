"""Image ingestion: PNG (via Pillow) and binary PPM (P6) / PGM (P5).

8-bit inputs are divided by 255 into the [0, 1] float convention used by
the metric code.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import DataFormatError
from ..image_metrics import Image


def _read_pnm(path) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise DataFormatError(f"{path}: unsupported PNM magic {magic!r} (only binary P5/P6)")
    # header: magic, width, height, maxval; '#' comments allowed
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(v) for v in fields)
    except ValueError as exc:
        raise DataFormatError(f"{path}: malformed PNM header") from exc
    if maxval != 255:
        raise DataFormatError(f"{path}: only maxval 255 is supported, got {maxval}")
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    body = data[pos : pos + need]
    if len(body) < need:
        raise DataFormatError(f"{path}: truncated PNM body ({len(body)} of {need} bytes)")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, channels)


def read_image(path) -> Image:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".ppm", ".pgm", ".pnm"):
        arr = _read_pnm(path)
    elif suffix == ".png":
        from PIL import Image as PilImage

        with PilImage.open(path) as im:
            if im.mode not in ("L", "RGB"):
                im = im.convert("RGB")
            arr = np.asarray(im)
            if arr.ndim == 2:
                arr = arr[:, :, None]
    else:
        raise DataFormatError(f"{path}: unsupported image format {suffix!r}")
    return Image(arr.astype(np.float64) / 255.0)


def write_pgm(path, values: np.ndarray) -> None:
    """8-bit binary PGM from a [0, 1] float array."""
    arr = np.clip(np.round(np.asarray(values) * 255.0), 0, 255).astype(np.uint8)
    if arr.ndim == 3:
        arr = arr[:, :, 0]
    with open(path, "wb") as f:
        f.write(f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode())
        f.write(arr.tobytes())


def write_ppm(path, values: np.ndarray) -> None:
    """8-bit binary PPM from a [0, 1] float (H, W, 3) array."""
    arr = np.clip(np.round(np.asarray(values) * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(f"P6\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode())
        f.write(arr.tobytes())
