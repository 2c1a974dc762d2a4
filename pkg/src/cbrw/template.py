"""Cancelable templates: BitXOR and BitCMP over the random walk matrix."""
import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .formats import key_fingerprint
from .pixel import ChannelPlane, RasterImage, check_same_shape
from .rwm import check_key_fits


class Method(str, enum.Enum):
    BITXOR = "xor"
    BITCMP = "cmp"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"xor": cls.BITXOR, "bitxor": cls.BITXOR, "cmp": cls.BITCMP, "bitcmp": cls.BITCMP}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown template method {value!r}; use 'xor' or 'cmp'") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CancelableTemplate:
    image: RasterImage
    method: Method
    key_fingerprint: str


def cbrw_bitxor(secret, rwm):
    check_same_shape(secret, rwm)
    return ChannelPlane(np.bitwise_xor(secret.values, rwm.values))


def cbrw_bitcmp(secret, rwm):
    """8-bit complement of the XOR of ``secret`` and ``rwm``."""
    check_same_shape(secret, rwm)
    intermediate = np.bitwise_xor(secret.values, rwm.values)
    return ChannelPlane(np.bitwise_not(intermediate))


def enroll(image, key, method=Method.BITXOR):
    """Issue a cancelable template for ``image`` under ``key``.

    Runs the walk and the XOR (plus complement for BitCMP) in a single fused
    pass per channel; the result is identical to composing
    :func:`~cbrw.rwm.generate_rwm` with :func:`cbrw_bitxor` /
    :func:`cbrw_bitcmp`.
    """
    method = Method.parse(method)
    check_key_fits(image, key)
    complement = method is Method.BITCMP
    planes = []
    for c, plane in enumerate(image.channels):
        flat = _kernels.enroll(plane.flat, key.offsets[c].reshape(-1), complement)
        planes.append(ChannelPlane.from_flat(flat, image.width, image.height))
    return CancelableTemplate(RasterImage(tuple(planes)), method, key_fingerprint(key))
