"""Per-pixel hot loops, each in a numba and a pure-numpy flavour.

The numba path is used when numba imports and ``CBRW_DISABLE_NUMBA`` is not
set to a truthy value. Both flavours are always importable under their
explicit names (``*_numpy`` / ``*_numba``) so tests and the benchmark can
compare them; the unsuffixed names are the dispatched ones.

All kernels take flat (1-D) C-contiguous arrays.
"""
import os

import numpy as np

_TRUTHY = {"1", "true", "yes", "on"}

DISABLED_BY_ENV = os.environ.get("CBRW_DISABLE_NUMBA", "").strip().lower() in _TRUTHY

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
BACKEND = "numba" if HAVE_NUMBA and not DISABLED_BY_ENV else "numpy"


# ---------------------------------------------------------------------------
# numpy flavour


def rwm_numpy(secret, offsets):
    n = secret.shape[0]
    target = (np.arange(n, dtype=np.int64) + offsets) % n
    total = secret.astype(np.uint16) + secret[target]
    return (total & 0xFF).astype(np.uint8)


def enroll_numpy(secret, offsets, complement):
    out = secret ^ rwm_numpy(secret, offsets)
    if complement:
        np.bitwise_not(out, out=out)
    return out


def pair_sums_numpy(a, b):
    """Exact integer sums used by every metric.

    Returns (sum_a, sum_b, sum_aa, sum_bb, sum_ab, sum_absdiff, sum_sqdiff,
    n_differ) as int64.
    """
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    d = a - b
    return np.array(
        [
            a.sum(),
            b.sum(),
            (a * a).sum(),
            (b * b).sum(),
            (a * b).sum(),
            np.abs(d).sum(),
            (d * d).sum(),
            np.count_nonzero(d),
        ],
        dtype=np.int64,
    )


# ---------------------------------------------------------------------------
# numba flavour

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _rwm_jit(secret, offsets, out):
        n = secret.shape[0]
        for p in range(n):
            # numba follows Python's floor-mod for ints: q is in [0, n)
            q = (p + np.int64(offsets[p])) % n
            out[p] = (np.int64(secret[p]) + np.int64(secret[q])) & 0xFF

    @numba.njit(cache=True, nogil=True)
    def _enroll_jit(secret, offsets, mask, out):
        n = secret.shape[0]
        for p in range(n):
            q = (p + np.int64(offsets[p])) % n
            s = np.int64(secret[p])
            rw = (s + np.int64(secret[q])) & 0xFF
            out[p] = (s ^ rw) ^ mask

    @numba.njit(cache=True, nogil=True)
    def _pair_sums_jit(a, b, out):
        sa = sb = saa = sbb = sab = sabs = ssq = ndiff = 0
        for i in range(a.shape[0]):
            x = np.int64(a[i])
            y = np.int64(b[i])
            d = x - y
            sa += x
            sb += y
            saa += x * x
            sbb += y * y
            sab += x * y
            ssq += d * d
            if d != 0:
                ndiff += 1
                sabs += d if d > 0 else -d
        out[0] = sa
        out[1] = sb
        out[2] = saa
        out[3] = sbb
        out[4] = sab
        out[5] = sabs
        out[6] = ssq
        out[7] = ndiff

    def rwm_numba(secret, offsets):
        out = np.empty(secret.shape[0], dtype=np.uint8)
        _rwm_jit(secret, offsets, out)
        return out

    def enroll_numba(secret, offsets, complement):
        out = np.empty(secret.shape[0], dtype=np.uint8)
        _enroll_jit(secret, offsets, 0xFF if complement else 0, out)
        return out

    def pair_sums_numba(a, b):
        out = np.empty(8, dtype=np.int64)
        _pair_sums_jit(a, b, out)
        return out

else:  # pragma: no cover
    rwm_numba = enroll_numba = pair_sums_numba = None


if BACKEND == "numba":
    rwm, enroll, pair_sums = rwm_numba, enroll_numba, pair_sums_numba
else:
    rwm, enroll, pair_sums = rwm_numpy, enroll_numpy, pair_sums_numpy


def warmup():
    """Force JIT compilation so first-call latency does not land in timings."""
    if not HAVE_NUMBA:
        return
    s = np.arange(4, dtype=np.uint8)
    r = np.array([1, -1, 0, 5], dtype=np.int32)
    rwm_numba(s, r)
    enroll_numba(s, r, True)
    pair_sums_numba(s, s)
