"""8-bit image grids and the wrap-around index arithmetic of the walk.

Images are flattened row-major (left to right, top to bottom) and all
indices are 0-based.
"""
from dataclasses import dataclass

import numpy as np


def _as_plane_array(values):
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise ValueError(f"a channel plane must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"a channel plane needs at least one pixel, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.dtype.kind not in "iub":
            raise ValueError(f"pixel values must be integers, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("pixel values must lie in [0, 255]")
    out = np.array(arr, dtype=np.uint8, order="C", copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ChannelPlane:
    """One 8-bit intensity grid, stored as a read-only (height, width) array."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_plane_array(self.values))

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def size(self):
        return self.values.size

    @property
    def flat(self):
        return self.values.reshape(-1)

    @classmethod
    def from_flat(cls, flat, width, height):
        return cls(np.asarray(flat).reshape(height, width))

    def __eq__(self, other):
        if not isinstance(other, ChannelPlane):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"ChannelPlane({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class RasterImage:
    """A gray (1 plane) or RGB (3 planes) image; all planes share dimensions."""

    channels: tuple

    def __post_init__(self):
        planes = tuple(
            p if isinstance(p, ChannelPlane) else ChannelPlane(p) for p in self.channels
        )
        if len(planes) not in (1, 3):
            raise ValueError(f"an image has 1 or 3 channels, got {len(planes)}")
        shape = planes[0].values.shape
        for p in planes[1:]:
            if p.values.shape != shape:
                raise ValueError(
                    f"channel planes differ in size: {p.values.shape} vs {shape}"
                )
        object.__setattr__(self, "channels", planes)

    @classmethod
    def from_array(cls, arr):
        """Build from a (H, W) gray array or a (H, W, 3) interleaved RGB array."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            return cls((ChannelPlane(arr),))
        if arr.ndim == 3 and arr.shape[2] in (1, 3):
            return cls(tuple(ChannelPlane(arr[:, :, c]) for c in range(arr.shape[2])))
        raise ValueError(f"expected (H, W) or (H, W, 3) array, got shape {arr.shape}")

    def to_array(self):
        if len(self.channels) == 1:
            return self.channels[0].values.copy()
        return np.stack([p.values for p in self.channels], axis=-1)

    @property
    def width(self):
        return self.channels[0].width

    @property
    def height(self):
        return self.channels[0].height

    @property
    def n_channels(self):
        return len(self.channels)

    @property
    def shape(self):
        return (self.height, self.width, self.n_channels)

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return len(self.channels) == len(other.channels) and all(
            a == b for a, b in zip(self.channels, other.channels)
        )

    def __repr__(self):
        kind = "gray" if self.n_channels == 1 else "rgb"
        return f"RasterImage({self.width}x{self.height}, {kind})"


def flatten_index(row, col, width, height=None):
    """Row-major linear index of ``(row, col)``.

    ``height`` is optional; when given, ``row`` is bounds-checked against it.
    """
    if width < 1:
        raise ValueError(f"width must be positive, got {width}")
    if col < 0 or col >= width:
        raise ValueError(f"column {col} outside [0, {width})")
    if row < 0 or (height is not None and row >= height):
        raise ValueError(f"row {row} outside [0, {height})")
    return row * width + col


def wrap_target(p, offset, n):
    """Index reached from ``p`` after ``offset`` signed steps on a ring of ``n`` pixels.

    Stepping past the last pixel continues from the first (overflow) and
    stepping before the first continues from the last (underflow).
    """
    if n < 1:
        raise ValueError(f"pixel count must be positive, got {n}")
    if p < 0 or p >= n:
        raise ValueError(f"position {p} outside [0, {n})")
    return (p + offset) % n


def check_same_shape(a, b):
    """Raise ValueError unless two images (or planes) have identical geometry."""
    if isinstance(a, ChannelPlane) and isinstance(b, ChannelPlane):
        if a.values.shape != b.values.shape:
            raise ValueError(
                f"plane size mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
            )
        return
    if a.shape != b.shape:
        raise ValueError(
            "image mismatch: "
            f"{a.width}x{a.height}x{a.n_channels} vs {b.width}x{b.height}x{b.n_channels}"
        )
