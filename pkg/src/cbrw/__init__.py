"""Cancelable biometric templates from a 1-D random walk over image pixels."""

__version__ = "0.1.0"

from . import _kernels
from .formats import (
    FormatError,
    ReportRow,
    key_fingerprint,
    read_image,
    read_key,
    read_report_csv,
    write_image,
    write_key,
    write_report,
)
from .metrics import (
    HistogramSet,
    MetricsReport,
    correlation,
    evaluate_pair,
    histogram,
    mae,
    mse,
    npcr,
    psnr,
    rmse,
    ssim,
    uaci,
)
from .pixel import ChannelPlane, RasterImage, flatten_index, wrap_target
from .rwm import OffsetGrid, default_offset_bound, generate_offset_grid, generate_rwm, generate_rwm_image
from .template import CancelableTemplate, Method, cbrw_bitcmp, cbrw_bitxor, enroll


def backend():
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return _kernels.BACKEND
