"""Both kernel flavours must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest

from cbrw import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _inputs(rng, n, bound):
    secret = rng.integers(0, 256, n, dtype=np.uint8)
    offsets = rng.integers(-bound, bound + 1, n).astype(np.int32)
    return secret, offsets


@needs_numba
@pytest.mark.parametrize("n,bound", [(1, 5), (7, 100), (1000, 10), (76_800, 38_400), (50, 2**31 - 1)])
def test_rwm_agree(rng, n, bound):
    s, r = _inputs(rng, n, bound)
    assert np.array_equal(_kernels.rwm_numba(s, r), _kernels.rwm_numpy(s, r))


@needs_numba
@pytest.mark.parametrize("complement", [False, True])
def test_enroll_agree(rng, complement):
    s, r = _inputs(rng, 5000, 2500)
    assert np.array_equal(_kernels.enroll_numba(s, r, complement), _kernels.enroll_numpy(s, r, complement))


@needs_numba
def test_pair_sums_agree(rng):
    a = rng.integers(0, 256, 10_000, dtype=np.uint8)
    b = rng.integers(0, 256, 10_000, dtype=np.uint8)
    assert np.array_equal(_kernels.pair_sums_numba(a, b), _kernels.pair_sums_numpy(a, b))
    assert np.array_equal(_kernels.pair_sums_numba(a, a), _kernels.pair_sums_numpy(a, a))


def test_pair_sums_values():
    a = np.array([0, 255, 3], dtype=np.uint8)
    b = np.array([255, 255, 1], dtype=np.uint8)
    # sa, sb, saa, sbb, sab, sum|d|, sum d^2, n_differ
    expected = [258, 511, 65034, 130051, 65028, 257, 65029, 2]
    assert _kernels.pair_sums_numpy(a, b).tolist() == expected
    assert _kernels.pair_sums(a, b).tolist() == expected


def test_env_flag_selects_numpy():
    code = (
        "import cbrw, numpy as np; from cbrw import _kernels as k;"
        "img = cbrw.read_image({path!r});"
        "key = cbrw.generate_offset_grid(img.width, img.height, seed=4);"
        "print(cbrw.backend(), k.rwm is k.rwm_numpy, cbrw.enroll(img, key).image.to_array().sum())"
    ).format(path=os.path.join(os.path.dirname(__file__), "data", "face_320x240.pgm"))
    env = dict(os.environ, CBRW_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, is_numpy, total = out.stdout.split()
    assert backend == "numpy" and is_numpy == "True"

    from cbrw import enroll, generate_offset_grid, read_image
    img = read_image(os.path.join(os.path.dirname(__file__), "data", "face_320x240.pgm"))
    assert int(total) == int(enroll(img, generate_offset_grid(img.width, img.height, seed=4)).image.to_array().sum())
