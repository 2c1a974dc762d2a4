"""SplitMix64 as a counter-based stream, vectorized with numpy.

Output ``k`` (0-based) of seed ``s`` is ``mix(s + (k + 1) * GOLDEN)`` with
all arithmetic mod 2**64, which is exactly the sequence produced by the
usual stateful SplitMix64. Being a pure function of (seed, counter), the
stream is identical on every platform and numpy version.
"""
import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _check_seed(seed):
    seed = int(seed)
    if seed < 0 or seed > _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def splitmix64(seed, count, start=0):
    """``count`` raw 64-bit outputs starting at counter ``start``."""
    seed = _check_seed(seed)
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = k * np.uint64(GOLDEN_GAMMA) + np.uint64(seed)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform_integers(seed, count, low, high):
    """``count`` integers drawn uniformly from ``[low, high]`` (inclusive).

    Unbiased: raw draws at or above the largest multiple of the range width
    are rejected and the stream continues at the next counter.
    """
    if high < low:
        raise ValueError(f"empty range [{low}, {high}]")
    span = high - low + 1
    if span > 1 << 63:
        raise ValueError("range too wide")
    limit = np.uint64((1 << 64) - ((1 << 64) % span) - 1)  # inclusive acceptance bound
    out = np.empty(count, dtype=np.int64)
    filled = 0
    counter = 0
    while filled < count:
        need = count - filled
        # a little extra so one batch nearly always suffices
        batch = need + need // 64 + 16
        raw = splitmix64(seed, batch, start=counter)
        counter += batch
        keep = raw[raw <= limit][:need]
        out[filled : filled + keep.size] = (keep % np.uint64(span)).astype(np.int64) + low
        filled += keep.size
    return out
