"""Byte-exact codecs: binary graymap (P5), binary bitmap (P4) and the
blueprint sidecar.

Sidecar layout (all integers big-endian)::

    "OEW1"  version:u8=1  layer_count:u8  reserved:u16=0  height:u32  width:u32
    per layer, in embed order:
        msg_rows:u32  msg_cols:u32
        keys        ceil(H*W/8) bytes, row-major, MSB first, zero padded
        magnitudes  H*W bytes, row-major
    crc32:u32 over every preceding byte
"""
from __future__ import annotations

import struct
import zlib

import numpy as np

from .blueprint import Blueprint
from .errors import (BadMagic, CrcMismatch, InconsistentDimensions, InvalidBlueprint,
                     MalformedHeader, MessageTooLarge, Truncated, TruncatedPixelData,
                     UnsupportedMaxval, UnsupportedVersion)
from .pipeline import Layer, LayerStack
from .pixel_core import BitMatrix, GrayImage

SIDECAR_MAGIC = b"OEW1"
SIDECAR_VERSION = 1
_HEAD = struct.Struct(">4sBBHII")
_LAYER_HEAD = struct.Struct(">II")
_CRC = struct.Struct(">I")

_WHITESPACE = b" \t\n\r\v\f"


def _parse_header(data: bytes, magic: bytes, ntokens: int) -> tuple[list[int], int]:
    """Read `ntokens` decimal fields after `magic`.

    Returns the values and the offset of the first raster byte.  Comments run
    from '#' to end of line; exactly one whitespace byte ends the header.
    """
    if data[:2] != magic:
        raise MalformedHeader(f"expected magic {magic!r}, got {bytes(data[:2])!r}")
    pos = 2
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE + b"#":
        raise MalformedHeader("magic number must be followed by whitespace")
    values = []
    while len(values) < ntokens:
        if pos >= len(data):
            raise MalformedHeader("header ended early")
        ch = data[pos:pos + 1]
        if ch and ch in _WHITESPACE:
            pos += 1
        elif ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise MalformedHeader("unterminated comment in header")
            pos = nl + 1
        elif ch.isdigit():
            end = pos
            while end < len(data) and data[end:end + 1].isdigit():
                end += 1
            values.append(int(data[pos:end]))
            pos = end
        else:
            raise MalformedHeader(f"unexpected byte {ch!r} in header at offset {pos}")
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise MalformedHeader("header must end with a single whitespace byte")
    return values, pos + 1


def read_graymap(data: bytes) -> GrayImage:
    (width, height, maxval), off = _parse_header(bytes(data), b"P5", 3)
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise MalformedHeader(f"bad maxval {maxval}")
    if maxval != 255:
        raise UnsupportedMaxval(f"only maxval 255 is supported, got {maxval}")
    need = width * height
    raster = data[off:off + need]
    if len(raster) < need:
        raise TruncatedPixelData(f"expected {need} pixel bytes, found {len(raster)}")
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def write_graymap(image: GrayImage) -> bytes:
    return b"P5\n%d %d\n255\n" % (image.width, image.height) + image.pixels.tobytes()


def read_bitmap(data: bytes) -> BitMatrix:
    """Decode a P4 bitmap; black pixels (set bits) become 1."""
    (width, height), off = _parse_header(bytes(data), b"P4", 2)
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    stride = (width + 7) // 8
    need = stride * height
    raster = data[off:off + need]
    if len(raster) < need:
        raise TruncatedPixelData(f"expected {need} raster bytes, found {len(raster)}")
    packed = np.frombuffer(raster, dtype=np.uint8).reshape(height, stride)
    return BitMatrix(np.unpackbits(packed, axis=1, bitorder="big")[:, :width])


def write_bitmap(bits: BitMatrix) -> bytes:
    packed = np.packbits(bits.bits, axis=1, bitorder="big")
    return b"P4\n%d %d\n" % (bits.cols, bits.rows) + packed.tobytes()


def sidecar_size(height: int, width: int, layer_count: int) -> int:
    n = height * width
    return _HEAD.size + layer_count * (_LAYER_HEAD.size + (n + 7) // 8 + n) + _CRC.size


def write_sidecar(stack: LayerStack) -> bytes:
    h, w = stack.shape
    if len(stack) > 255:
        raise ValueError("a sidecar holds at most 255 layers")
    parts = [_HEAD.pack(SIDECAR_MAGIC, SIDECAR_VERSION, len(stack), 0, h, w)]
    for layer in stack:
        parts.append(_LAYER_HEAD.pack(layer.message_rows, layer.message_cols))
        parts.append(np.packbits(layer.blueprint.keys.ravel(), bitorder="big").tobytes())
        parts.append(layer.blueprint.magnitudes.tobytes())
    body = b"".join(parts)
    return body + _CRC.pack(zlib.crc32(body))


def read_sidecar(data: bytes) -> LayerStack:
    data = bytes(data)
    if len(data) < _HEAD.size + _CRC.size:
        if len(data) >= 4 and data[:4] != SIDECAR_MAGIC:
            raise BadMagic(f"not a sidecar file (magic {data[:4]!r})")
        raise Truncated(f"sidecar too short: {len(data)} bytes")
    magic, version, count, reserved, h, w = _HEAD.unpack_from(data)
    if magic != SIDECAR_MAGIC:
        raise BadMagic(f"not a sidecar file (magic {magic!r})")
    if version != SIDECAR_VERSION or reserved != 0:
        raise UnsupportedVersion(f"sidecar version {version} (reserved={reserved}) not supported")
    if count < 1 or h < 1 or w < 1:
        raise InconsistentDimensions(f"header declares {count} layers of {h}x{w}")
    expected = sidecar_size(h, w, count)
    if len(data) < expected:
        raise Truncated(f"sidecar is {len(data)} bytes, header implies {expected}")
    if len(data) > expected:
        raise InconsistentDimensions(
            f"sidecar is {len(data)} bytes, header implies {expected}")
    (stored,) = _CRC.unpack_from(data, expected - _CRC.size)
    if zlib.crc32(data[:expected - _CRC.size]) != stored:
        raise CrcMismatch("sidecar checksum does not match its contents")

    n = h * w
    key_len = (n + 7) // 8
    pos = _HEAD.size
    layers = []
    for k in range(count):
        rows, cols = _LAYER_HEAD.unpack_from(data, pos)
        pos += _LAYER_HEAD.size
        keys = np.unpackbits(np.frombuffer(data, np.uint8, key_len, pos), count=n, bitorder="big")
        pos += key_len
        mags = np.frombuffer(data, np.uint8, n, pos)
        pos += n
        try:
            bp = Blueprint(mags.reshape(h, w), keys.reshape(h, w))
            layers.append(Layer(rows, cols, bp))
            LayerStack((layers[-1],))  # geometry check for this layer
        except (InvalidBlueprint, MessageTooLarge) as exc:
            raise InconsistentDimensions(f"layer {k}: {exc}") from exc
    return LayerStack(tuple(layers))
