"""PSNR and SSIM for novel-view-synthesis evaluation.

Images are float arrays in [0, 1], shaped (H, W) or (H, W, 3). SSIM uses
the original reference constants: 11x11 Gaussian window with sigma 1.5,
K1 = 0.01, K2 = 0.03, dynamic range 1, valid-region convolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass(frozen=True)
class Image:
    """Pixel values in [0, 1]; 1 or 3 channels."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 2:
            v = v[:, :, None]
        if v.ndim != 3 or v.shape[2] not in (1, 3):
            raise ValueError("image must be (H, W) or (H, W, {1 or 3})")
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("pixel values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return self.values.shape[2]


def _as_array(img) -> np.ndarray:
    if isinstance(img, Image):
        return img.values
    return Image(np.asarray(img)).values


def _check_pair(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"image shape mismatch: {a.shape} vs {b.shape}")


def psnr(pred, gt) -> float:
    """Peak signal-to-noise ratio in dB with peak 1.0.

    Identical images give +inf (serialize as the string "inf").
    """
    p, g = _as_array(pred), _as_array(gt)
    _check_pair(p, g)
    mse = float(((p - g) ** 2).mean())
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    ax = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(ax**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(pred, gt, luminance_only: bool = False) -> float:
    """Mean structural similarity.

    Local statistics come from an 11x11 Gaussian window applied without
    padding; per-channel maps are averaged over channels and pixels.
    With luminance_only, RGB inputs are converted to luma first.
    """
    p, g = _as_array(pred), _as_array(gt)
    _check_pair(p, g)
    if luminance_only and p.shape[2] == 3:
        lw = np.array([0.299, 0.587, 0.114])
        p = (p @ lw)[:, :, None]
        g = (g @ lw)[:, :, None]
    if min(p.shape[0], p.shape[1]) < SSIM_WINDOW:
        raise ValueError(f"image smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window")
    c1 = SSIM_K1**2
    c2 = SSIM_K2**2
    w = gaussian_window()
    vals = []
    for ch in range(p.shape[2]):
        x, y = p[:, :, ch], g[:, :, ch]
        mx = fftconvolve(x, w, mode="valid")
        my = fftconvolve(y, w, mode="valid")
        mxx = fftconvolve(x * x, w, mode="valid")
        myy = fftconvolve(y * y, w, mode="valid")
        mxy = fftconvolve(x * y, w, mode="valid")
        vx = mxx - mx * mx
        vy = myy - my * my
        cxy = mxy - mx * my
        s = ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
        vals.append(s.mean())
    return float(np.mean(vals))
