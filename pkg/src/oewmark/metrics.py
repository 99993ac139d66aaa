"""Quality metrics: PSNR, MSE, Pearson correlation, pixel-difference stats."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, MessageTooLarge, ZeroVariance
from .pixel_core import BitMatrix, GrayImage

PEAK = 255


@dataclass(frozen=True)
class QualityReport:
    psnr: float  # math.inf when the images are identical
    mse: Fraction
    max_abs_diff: int
    changed_pixels: int
    total_pixels: int


def _values(x) -> np.ndarray:
    if isinstance(x, GrayImage):
        return x.pixels
    if isinstance(x, BitMatrix):
        return x.bits
    return np.asarray(x)


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"shapes differ: {va.shape} vs {vb.shape}")
    return va.astype(np.int64), vb.astype(np.int64)


def mse(a: GrayImage, b: GrayImage) -> Fraction:
    va, vb = _pair(a, b)
    sse = int(((va - vb) ** 2).sum())
    return Fraction(sse, va.size)


def psnr(a: GrayImage, b: GrayImage) -> float:
    """10*log10(255^2 / MSE) in dB; ``math.inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10 * math.log10(PEAK ** 2 * err.denominator / err.numerator)


def correlation(a, b) -> float:
    """Pearson correlation over all elements.

    Sums are accumulated in exact integer arithmetic, so identical inputs give
    exactly 1.0 and complementary ones exactly -1.0.
    """
    va, vb = _pair(a, b)
    n = va.size
    sa, sb = int(va.sum()), int(vb.sum())
    cov = n * int((va * vb).sum()) - sa * sb
    var_a = n * int((va * va).sum()) - sa * sa
    var_b = n * int((vb * vb).sum()) - sb * sb
    if var_a == 0 or var_b == 0:
        raise ZeroVariance("correlation is undefined for a constant input")
    if cov * cov == var_a * var_b:
        return 1.0 if cov > 0 else -1.0
    r = cov / math.sqrt(var_a * var_b)
    return max(-1.0, min(1.0, r))


def diff_stats(a: GrayImage, b: GrayImage) -> tuple[int, int]:
    """Return (max absolute difference, number of unequal pixels)."""
    va, vb = _pair(a, b)
    d = np.abs(va - vb)
    return int(d.max()), int(np.count_nonzero(d))


def quality_report(cover: GrayImage, marked: GrayImage) -> QualityReport:
    err = mse(cover, marked)
    max_diff, changed = diff_stats(cover, marked)
    return QualityReport(psnr(cover, marked), err, max_diff, changed, cover.height * cover.width)


def expected_psnr(cover_h: int, cover_w: int, msg_rows: int, msg_cols: int) -> float:
    """PSNR expected when each payload pixel changes by 1 with probability 1/2.

    MSE is averaged over the whole cover, so a fixed-size message gives higher
    PSNR as the cover grows.
    """
    if msg_rows < 1 or msg_cols < 1 or msg_rows > cover_h or msg_cols > cover_w - 1:
        raise MessageTooLarge(
            f"{msg_rows}x{msg_cols} message does not fit a {cover_h}x{cover_w} cover")
    return 10 * math.log10(PEAK ** 2 * cover_h * cover_w / (0.5 * msg_rows * msg_cols))


def worst_case_psnr(cover_h: int, cover_w: int, msg_rows: int, msg_cols: int) -> float:
    """PSNR when every payload pixel changes by exactly 1."""
    if msg_rows < 1 or msg_cols < 1 or msg_rows > cover_h or msg_cols > cover_w - 1:
        raise MessageTooLarge(
            f"{msg_rows}x{msg_cols} message does not fit a {cover_h}x{cover_w} cover")
    return 10 * math.log10(PEAK ** 2 * cover_h * cover_w / (msg_rows * msg_cols))
