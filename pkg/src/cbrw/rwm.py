"""Random offset grids (the revocable key) and the random walk matrix."""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .pixel import ChannelPlane, RasterImage
from .prng import uniform_integers

GENERATOR_SPLITMIX64 = 1
GENERATORS = {GENERATOR_SPLITMIX64: "splitmix64"}

MAX_OFFSET_BOUND = 2**31 - 1


def default_offset_bound(width, height):
    """Half the pixel count: the widest range that is not redundant under wrap.

    With this bound the walk can reach every pixel of the image, so the
    partner pixel is close to uniform over the whole grid.
    """
    return min(max(1, (width * height) // 2), MAX_OFFSET_BOUND)


@dataclass(frozen=True, eq=False)
class OffsetGrid:
    """Signed per-pixel step counts, one plane per image channel.

    ``offsets`` has shape (channels, height, width) and dtype int32.
    """

    width: int
    height: int
    channels: int
    offsets: np.ndarray
    seed: int
    offset_bound: int
    generator_id: int = GENERATOR_SPLITMIX64

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"key dimensions must be positive, got {self.width}x{self.height}")
        if self.channels not in (1, 3):
            raise ValueError(f"key channels must be 1 or 3, got {self.channels}")
        if not 1 <= self.offset_bound <= MAX_OFFSET_BOUND:
            raise ValueError(f"offset bound must be in [1, {MAX_OFFSET_BOUND}], got {self.offset_bound}")
        if self.generator_id not in GENERATORS:
            raise ValueError(f"unknown generator id {self.generator_id}")
        arr = np.asarray(self.offsets)
        expected = (self.channels, self.height, self.width)
        if arr.size != self.channels * self.height * self.width:
            raise ValueError(f"offsets hold {arr.size} values, expected {np.prod(expected)}")
        arr = arr.reshape(expected)
        if arr.size and np.abs(arr.astype(np.int64)).max() > self.offset_bound:
            raise ValueError(f"offsets exceed the bound ±{self.offset_bound}")
        arr = np.array(arr, dtype=np.int32, order="C", copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "offsets", arr)

    def channel(self, index):
        """Offset plane for one channel, shape (height, width)."""
        return self.offsets[index]

    @property
    def generator(self):
        return GENERATORS[self.generator_id]

    def __eq__(self, other):
        if not isinstance(other, OffsetGrid):
            return NotImplemented
        return (
            (self.width, self.height, self.channels, self.seed, self.offset_bound, self.generator_id)
            == (other.width, other.height, other.channels, other.seed, other.offset_bound, other.generator_id)
            and np.array_equal(self.offsets, other.offsets)
        )

    def __repr__(self):
        return (
            f"OffsetGrid({self.width}x{self.height}x{self.channels}, seed={self.seed}, "
            f"bound={self.offset_bound}, generator={self.generator})"
        )


def generate_offset_grid(width, height, channels=1, seed=0, offset_bound=None):
    """Draw a key grid of offsets uniform on ``[-offset_bound, offset_bound]``.

    ``offset_bound=None`` selects :func:`default_offset_bound`. The grid is a
    pure function of its arguments: offsets come from one SplitMix64 stream
    laid out channel-major, then row-major.
    """
    if width < 1 or height < 1:
        raise ValueError(f"dimensions must be positive, got {width}x{height}")
    if channels not in (1, 3):
        raise ValueError(f"channels must be 1 or 3, got {channels}")
    if offset_bound is None:
        offset_bound = default_offset_bound(width, height)
    if offset_bound < 1:
        raise ValueError(f"offset bound must be positive, got {offset_bound}")
    values = uniform_integers(seed, channels * width * height, -offset_bound, offset_bound)
    return OffsetGrid(
        width=width,
        height=height,
        channels=channels,
        offsets=values.reshape(channels, height, width),
        seed=int(seed),
        offset_bound=int(offset_bound),
    )


def generate_rwm(secret, offsets):
    """Random walk matrix of one plane.

    Each pixel is added (mod 256) to the pixel reached by walking
    ``offsets[p]`` steps along the row-major ring: forward for positive,
    backward for negative, itself for zero.
    """
    offsets = np.asarray(offsets)
    if offsets.shape != secret.values.shape:
        raise ValueError(
            f"offset plane {offsets.shape[::-1]} does not match image "
            f"{secret.width}x{secret.height}"
        )
    flat = _kernels.rwm(secret.flat, np.ascontiguousarray(offsets, dtype=np.int32).reshape(-1))
    return ChannelPlane.from_flat(flat, secret.width, secret.height)


def check_key_fits(image, key):
    if key.channels != image.n_channels or (key.width, key.height) != (image.width, image.height):
        raise ValueError(
            f"key is {key.width}x{key.height}x{key.channels} but image is "
            f"{image.width}x{image.height}x{image.n_channels}"
        )


def generate_rwm_image(secret, key):
    """Apply :func:`generate_rwm` channel by channel with the matching key plane."""
    check_key_fits(secret, key)
    return RasterImage(
        tuple(generate_rwm(plane, key.channel(c)) for c, plane in enumerate(secret.channels))
    )
