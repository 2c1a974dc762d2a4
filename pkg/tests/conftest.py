from pathlib import Path

import numpy as np
import pytest

from cbrw import RasterImage, _kernels, read_image

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    _kernels.warmup()


@pytest.fixture(scope="session")
def face():
    """Natural 320x240 gray photograph (astronaut portrait crop)."""
    return read_image(DATA / "face_320x240.pgm")


@pytest.fixture(scope="session")
def face_rgb():
    return read_image(DATA / "face_rgb_64x64.ppm")


@pytest.fixture(scope="session")
def coins():
    return read_image(DATA / "coins_64x64.pgm")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_image(rng, height, width, channels=1):
    shape = (height, width) if channels == 1 else (height, width, channels)
    return RasterImage.from_array(rng.integers(0, 256, shape, dtype=np.uint8))


ANTI_A = [[0, 255], [0, 255]]
ANTI_B = [[255, 0], [255, 0]]


# acceptance criteria report: test_acceptance.record() appends here
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
