import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from oewmark import BitMatrix, GrayImage, Layer, LayerStack, build_blueprint, embed_multilayer
from oewmark import imagio
from oewmark.errors import (BadMagic, CrcMismatch, InconsistentDimensions, MalformedHeader,
                            SidecarError, Truncated, TruncatedPixelData, UnsupportedMaxval,
                            UnsupportedVersion)

shapes = st.tuples(st.integers(1, 20), st.integers(1, 20))
gray_images = shapes.flatmap(lambda s: arrays(np.uint8, s)).map(GrayImage)
bit_matrices = shapes.flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))).map(BitMatrix)


def crc32_bitwise(data: bytes) -> int:
    """Reflected CRC-32 (poly 0x04C11DB7, reflected 0xEDB88320), init/xorout 0xFFFFFFFF."""
    crc = 0xFFFFFFFF
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = (crc >> 1) ^ (0xEDB88320 if crc & 1 else 0)
    return crc ^ 0xFFFFFFFF


def sidecar_by_hand(h, w, layers):
    """Assemble a sidecar without the library's struct/packbits code paths."""
    out = bytearray(b"OEW1")
    out += bytes([1, len(layers), 0, 0])
    out += h.to_bytes(4, "big") + w.to_bytes(4, "big")
    for rows, cols, mags, keys in layers:
        out += rows.to_bytes(4, "big") + cols.to_bytes(4, "big")
        flat = [int(k) for row in keys for k in row]
        flat += [0] * (-len(flat) % 8)
        for i in range(0, len(flat), 8):
            byte = 0
            for bit in flat[i:i + 8]:
                byte = (byte << 1) | bit
            out.append(byte)
        out += bytes(int(m) for row in mags for m in row)
    out += crc32_bitwise(bytes(out)).to_bytes(4, "big")
    return bytes(out)


def test_crc_oracle_check_value():
    assert crc32_bitwise(b"123456789") == 0xCBF43926


# graymap

def test_write_graymap_exact_bytes():
    img = GrayImage.from_rows([[0, 255], [128, 7]])
    assert imagio.write_graymap(img) == b"P5\n2 2\n255\n\x00\xff\x80\x07"


@settings(max_examples=100)
@given(gray_images)
def test_graymap_round_trip_and_pillow_agrees(img):
    data = imagio.write_graymap(img)
    assert len(data) == len(b"P5\n%d %d\n255\n" % (img.width, img.height)) + img.height * img.width
    assert imagio.read_graymap(data) == img
    with Image.open(io.BytesIO(data)) as pil:
        assert pil.mode == "L"
        assert np.array_equal(np.asarray(pil), img.pixels)


def test_graymap_written_by_pillow(rng):
    arr = rng.integers(0, 256, size=(7, 5), dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PPM")
    assert np.array_equal(imagio.read_graymap(buf.getvalue()).pixels, arr)


def test_graymap_header_whitespace_and_comments():
    data = b"P5 # a comment\n  2\t# width\n1\r\n#x\n255\n\x01\x02"
    assert imagio.read_graymap(data).pixels.tolist() == [[1, 2]]


@pytest.mark.parametrize("data,err", [
    (b"P5\n2 1\n65535\n\x00\x01\x00\x02", UnsupportedMaxval),
    (b"P5\n2 1\n15\n\x00\x01", UnsupportedMaxval),
    (b"P5\n2 1\n0\n\x00\x01", MalformedHeader),
    (b"P6\n2 1\n255\n\x00\x01", MalformedHeader),
    (b"P52 1\n255\n\x00\x01", MalformedHeader),
    (b"P5\n2 1\n255", MalformedHeader),
    (b"P5\n2 x\n255\n\x00\x01", MalformedHeader),
    (b"P5\n0 1\n255\n", MalformedHeader),
    (b"P5\n2 # never ends", MalformedHeader),
    (b"", MalformedHeader),
    (b"P5\n2 2\n255\n\x00\x01\x02", TruncatedPixelData),
])
def test_graymap_malformed(data, err):
    with pytest.raises(err):
        imagio.read_graymap(data)


# bitmap

def test_write_bitmap_exact_bytes():
    assert imagio.write_bitmap(BitMatrix.from_rows([[1, 0, 1]])) == b"P4\n3 1\n\xa0"


def test_bitmap_row_padding():
    bits = BitMatrix.from_rows([[1] * 9, [0] * 8 + [1]])
    assert imagio.write_bitmap(bits) == b"P4\n9 2\n\xff\x80\x00\x80"


@settings(max_examples=100)
@given(bit_matrices)
def test_bitmap_round_trip_and_pillow_agrees(bits):
    data = imagio.write_bitmap(bits)
    assert imagio.read_bitmap(data) == bits
    assert imagio.write_bitmap(imagio.read_bitmap(data)) == data
    with Image.open(io.BytesIO(data)) as pil:
        # Pillow maps black (bit 1) to 0
        assert np.array_equal(np.asarray(pil.convert("L")) == 0, bits.bits == 1)


def test_bitmap_ignores_padding_bits():
    assert imagio.read_bitmap(b"P4\n3 1\n\xbf").bits.tolist() == [[1, 0, 1]]


@pytest.mark.parametrize("data,err", [
    (b"P4\n0 1\n", MalformedHeader),
    (b"P4\n3 0\n", MalformedHeader),
    (b"P1\n1 1\n1", MalformedHeader),
    (b"P4\n3", MalformedHeader),
    (b"P4\n9 2\n\xff\x80\x00", TruncatedPixelData),
])
def test_bitmap_malformed(data, err):
    with pytest.raises(err):
        imagio.read_bitmap(data)


# sidecar

def test_example_sidecar_layout(example_cover):
    stack = LayerStack((Layer(4, 3, build_blueprint(example_cover)),))
    data = imagio.write_sidecar(stack)
    assert len(data) == 46 == imagio.sidecar_size(4, 4, 1)
    bp = stack.layers[0].blueprint
    assert data == sidecar_by_hand(4, 4, [(4, 3, bp.magnitudes.tolist(), bp.keys.tolist())])
    assert imagio.read_sidecar(data) == stack


@st.composite
def stacks(draw):
    h, w = draw(st.integers(1, 9)), draw(st.integers(2, 9))
    cover = GrayImage(draw(arrays(np.uint8, (h, w))))
    n = draw(st.integers(1, 4))
    msgs = [BitMatrix(draw(arrays(np.uint8, (draw(st.integers(1, h)), draw(st.integers(1, w - 1))),
                                  elements=st.integers(0, 1)))) for _ in range(n)]
    return embed_multilayer(cover, msgs)[1]


@settings(max_examples=100)
@given(stacks())
def test_sidecar_round_trip_matches_hand_layout(stack):
    data = imagio.write_sidecar(stack)
    h, w = stack.shape
    assert len(data) == imagio.sidecar_size(h, w, len(stack))
    hand = sidecar_by_hand(h, w, [(l.message_rows, l.message_cols, l.blueprint.magnitudes.tolist(),
                                   l.blueprint.keys.tolist()) for l in stack])
    assert data == hand
    assert imagio.read_sidecar(data) == stack


def _stack(rng, h=5, w=6, layers=2):
    cover = GrayImage(rng.integers(0, 256, size=(h, w)))
    msgs = [BitMatrix(rng.integers(0, 2, size=(h, w - 1))) for _ in range(layers)]
    return embed_multilayer(cover, msgs)[1]


def test_every_single_byte_flip_is_detected(rng):
    data = imagio.write_sidecar(_stack(rng))
    for pos in range(len(data)):
        bad = bytearray(data)
        bad[pos] ^= 0x01 << (pos % 8)
        with pytest.raises(SidecarError):
            imagio.read_sidecar(bytes(bad))
        if pos >= 16:  # past the fixed header every flip is a checksum failure
            with pytest.raises(CrcMismatch):
                imagio.read_sidecar(bytes(bad))


def _recrc(body: bytes) -> bytes:
    return body + crc32_bitwise(body).to_bytes(4, "big")


def test_sidecar_malformed_classes(rng):
    data = imagio.write_sidecar(_stack(rng))
    body = data[:-4]
    with pytest.raises(BadMagic):
        imagio.read_sidecar(b"XXXX" + data[4:])
    with pytest.raises(UnsupportedVersion):
        imagio.read_sidecar(_recrc(body[:4] + b"\x02" + body[5:]))
    with pytest.raises(UnsupportedVersion):
        imagio.read_sidecar(_recrc(body[:6] + b"\x00\x01" + body[8:]))
    with pytest.raises(Truncated):
        imagio.read_sidecar(data[:-1])
    with pytest.raises(Truncated):
        imagio.read_sidecar(data[:10])
    with pytest.raises(InconsistentDimensions):
        imagio.read_sidecar(data + b"\x00")
    with pytest.raises(InconsistentDimensions):  # zero layers
        imagio.read_sidecar(_recrc(body[:5] + b"\x00" + body[6:16]))
    # message wider than the cover allows, checksum recomputed
    bad = bytearray(body)
    bad[20:24] = (6).to_bytes(4, "big")
    with pytest.raises(InconsistentDimensions):
        imagio.read_sidecar(_recrc(bytes(bad)))
    # first-column magnitude must be zero
    bad = bytearray(body)
    bad[16 + 8 + 4] = 3
    with pytest.raises(InconsistentDimensions):
        imagio.read_sidecar(_recrc(bytes(bad)))
