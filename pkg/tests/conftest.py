import numpy as np
import pytest

from oewmark import BitMatrix, GrayImage

# 4x4 worked example cover and message
EXAMPLE_COVER = [
    [225, 225, 227, 228],
    [226, 226, 228, 229],
    [226, 224, 225, 226],
    [221, 224, 228, 228],
]
EXAMPLE_MESSAGE = [
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [1, 1, 1],
]


@pytest.fixture
def example_cover():
    return GrayImage.from_rows(EXAMPLE_COVER)


@pytest.fixture
def example_message():
    return BitMatrix.from_rows(EXAMPLE_MESSAGE)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_image(rng, h, w):
    return GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))


def random_bits(rng, r, c):
    return BitMatrix(rng.integers(0, 2, size=(r, c), dtype=np.uint8))


# acceptance results, filled by tests/test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}: {detail}")
