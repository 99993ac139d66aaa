"""Blueprint side information: first-column distances plus sign keys.

For every pixel the blueprint stores ``|C(i,0) - C(i,j)|`` and a key bit that
is 1 when ``C(i,0) <= C(i,j)``.  Since embedding never touches column 0, the
first column of the watermarked image together with the blueprint rebuilds
the cover exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidBlueprint, RangeViolation
from .pixel_core import GrayImage


@dataclass(frozen=True, eq=False)
class Blueprint:
    magnitudes: np.ndarray
    keys: np.ndarray

    def __post_init__(self):
        mags = np.asarray(self.magnitudes)
        keys = np.asarray(self.keys)
        if mags.ndim != 2 or mags.shape != keys.shape or mags.size == 0:
            raise InvalidBlueprint(
                f"magnitudes {mags.shape} and keys {keys.shape} must share a non-empty 2-D shape")
        if mags.min() < 0 or mags.max() > 255:
            raise InvalidBlueprint("magnitudes must lie in [0, 255]")
        if not np.isin(keys, (0, 1)).all():
            raise InvalidBlueprint("keys must be 0 or 1")
        if (mags[:, 0] != 0).any() or (keys[:, 0] != 1).any():
            raise InvalidBlueprint("first column must have magnitude 0 and key 1")
        if ((keys == 0) & (mags == 0)).any():
            raise InvalidBlueprint("a subtract key requires a non-zero magnitude")
        for name, arr in (("magnitudes", mags), ("keys", keys)):
            arr = np.array(arr, dtype=np.uint8)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def height(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def width(self) -> int:
        return self.magnitudes.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitudes.shape

    def __eq__(self, other):
        if not isinstance(other, Blueprint):
            return NotImplemented
        return (np.array_equal(self.magnitudes, other.magnitudes)
                and np.array_equal(self.keys, other.keys))

    __hash__ = None

    def __repr__(self):
        return f"Blueprint({self.height}x{self.width})"


def build_blueprint(image: GrayImage) -> Blueprint:
    px = image.pixels.astype(np.int16)
    diff = px[:, :1] - px  # signed difference, first column minus pixel
    return Blueprint(np.abs(diff), (diff <= 0).astype(np.uint8))


def reconstruct_image(first_column_source: GrayImage, bp: Blueprint) -> GrayImage:
    """Rebuild an image from the first column of `first_column_source` and `bp`.

    Only column 0 of the source is read.  Raises RangeViolation instead of
    clamping when a value falls outside [0, 255], since that can only happen
    with a blueprint that does not belong to the image.
    """
    if first_column_source.shape != bp.shape:
        raise DimensionMismatch(
            f"image {first_column_source.shape} vs blueprint {bp.shape}")
    base = first_column_source.pixels[:, :1].astype(np.int16)
    mags = bp.magnitudes.astype(np.int16)
    out = np.where(bp.keys == 1, base + mags, base - mags)
    bad = (out < 0) | (out > 255)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise RangeViolation(
            f"reconstructed value {int(out[i, j])} at ({i}, {j}) is outside [0, 255]")
    return GrayImage(out)
