"""Image/bit-matrix value types and the per-pixel parity rules.

Parity convention: an odd pixel carries bit 0, an even pixel carries bit 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.uint8, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An H x W matrix of 8-bit luminance values (immutable)."""

    pixels: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.pixels)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ValueError(f"GrayImage needs a non-empty 2-D array, got shape {raw.shape}")
        if raw.size and (raw.min() < 0 or raw.max() > 255):
            raise ValueError("pixel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(raw))

    @classmethod
    def from_rows(cls, rows) -> "GrayImage":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def __repr__(self):
        return f"GrayImage({self.height}x{self.width})"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """An r x c matrix of message bits (immutable)."""

    bits: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.bits)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ValueError(f"BitMatrix needs a non-empty 2-D array, got shape {raw.shape}")
        if not np.isin(raw, (0, 1)).all():
            raise ValueError("bit values must be exactly 0 or 1")
        object.__setattr__(self, "bits", _frozen(raw))

    @classmethod
    def from_rows(cls, rows) -> "BitMatrix":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


def embed_bit(pixel: int, bit: int) -> int:
    """Return the pixel value that carries `bit`, moving it by at most 1."""
    if not 0 <= pixel <= 255:
        raise ValueError(f"pixel out of range: {pixel}")
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    odd = pixel & 1
    if odd and bit == 0:
        return pixel
    if not odd and bit == 1:
        return pixel
    if odd:  # odd pixel, bit 1: make it even
        return 254 if pixel == 255 else pixel + 1
    return pixel + 1  # even pixel, bit 0: make it odd; 254 -> 255 is the ceiling


def decode_bit(pixel: int) -> int:
    if not 0 <= pixel <= 255:
        raise ValueError(f"pixel out of range: {pixel}")
    return 0 if pixel & 1 else 1


def embed_bits(pixels: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Vectorised embed_bit over equally shaped arrays; returns uint8."""
    p = np.asarray(pixels, dtype=np.int16)
    b = np.asarray(bits, dtype=np.int16)
    if p.shape != b.shape:
        raise ValueError(f"shape mismatch {p.shape} vs {b.shape}")
    mismatch = (p & 1) == b
    out = np.where(mismatch, np.where(p == 255, 254, p + 1), p)
    return out.astype(np.uint8)


def decode_bits(pixels: np.ndarray) -> np.ndarray:
    return (1 - (np.asarray(pixels, dtype=np.uint8) & 1)).astype(np.uint8)
