"""Dissimilarity measures between an original image and its template.

Every measure is computed per channel and averaged over channels. Pixel
sums are accumulated exactly in integers and only the final ratios are
taken in double precision, so results do not depend on image size or
summation order. Variances and covariance are population (divide by N).
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .pixel import check_same_shape

MAX_VALUE = 255
SSIM_T1 = (0.01 * MAX_VALUE) ** 2
SSIM_T2 = (0.03 * MAX_VALUE) ** 2

# column order of the report tables
REPORT_FIELDS = ("cr", "mae", "npcr", "psnr", "rmse", "ssim", "uaci")


@dataclass(frozen=True)
class PairStats:
    """Exact integer sums over one channel pair."""

    n: int
    sum_a: int
    sum_b: int
    sum_aa: int
    sum_bb: int
    sum_ab: int
    sum_absdiff: int
    sum_sqdiff: int
    n_differ: int

    @property
    def sxx(self):  # n^2 * var(a)
        return self.n * self.sum_aa - self.sum_a**2

    @property
    def syy(self):
        return self.n * self.sum_bb - self.sum_b**2

    @property
    def sxy(self):  # n^2 * cov(a, b)
        return self.n * self.sum_ab - self.sum_a * self.sum_b


def channel_stats(a, b):
    """Per-channel :class:`PairStats` for two images of identical geometry."""
    check_same_shape(a, b)
    out = []
    for pa, pb in zip(a.channels, b.channels):
        sums = _kernels.pair_sums(pa.flat, pb.flat)
        out.append(PairStats(pa.size, *(int(v) for v in sums)))
    return out


def _mean(values):
    return math.fsum(values) / len(values)


def _channel_corr(st):
    if st.sxx == 0 or st.syy == 0:
        return 0.0, True
    r = st.sxy / math.sqrt(st.sxx * st.syy)
    return max(-1.0, min(1.0, r)), False


def _channel_ssim(st):
    n2 = st.n * st.n
    mu_a = st.sum_a / st.n
    mu_b = st.sum_b / st.n
    var_a = st.sxx / n2
    var_b = st.syy / n2
    cov = st.sxy / n2
    num = (2 * mu_a * mu_b + SSIM_T1) * (2 * cov + SSIM_T2)
    den = (mu_a * mu_a + mu_b * mu_b + SSIM_T1) * (var_a + var_b + SSIM_T2)
    return num / den


def _mse(stats):
    return _mean([st.sum_sqdiff / st.n for st in stats])


def _mae(stats):
    return _mean([st.sum_absdiff / st.n for st in stats])


def _psnr_from_mse(value):
    if value == 0:
        return math.inf
    return 20.0 * math.log10(MAX_VALUE / math.sqrt(value))


def correlation(a, b):
    """Pearson correlation averaged over channels.

    Returns ``(cr, degenerate)``. A channel in which either image is constant
    has no defined correlation; it contributes 0 and sets ``degenerate``.
    """
    parts = [_channel_corr(st) for st in channel_stats(a, b)]
    return _mean([r for r, _ in parts]), any(flag for _, flag in parts)


def mse(a, b):
    return _mse(channel_stats(a, b))


def rmse(a, b):
    return math.sqrt(mse(a, b))


def psnr(a, b):
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    return _psnr_from_mse(mse(a, b))


def ssim(a, b):
    """Structural similarity from whole-image statistics (no sliding window)."""
    return _mean([_channel_ssim(st) for st in channel_stats(a, b)])


def mae(a, b):
    return _mae(channel_stats(a, b))


def npcr(a, b):
    """Percentage of pixel positions whose values differ."""
    return _mean([100.0 * st.n_differ / st.n for st in channel_stats(a, b)])


def uaci(a, b):
    return 100.0 * mae(a, b) / MAX_VALUE


@dataclass(frozen=True)
class MetricsReport:
    cr: float
    mae: float
    npcr: float
    psnr: float
    rmse: float
    ssim: float
    uaci: float
    mse: float
    degenerate_cr: bool = False

    @property
    def psnr_infinite(self):
        return math.isinf(self.psnr)

    def as_dict(self):
        return asdict(self)


def evaluate_pair(original, template):
    """All measures for one (original, template) pair from a single pass."""
    stats = channel_stats(original, template)
    corr = [_channel_corr(st) for st in stats]
    mse_value = _mse(stats)
    mae_value = _mae(stats)
    return MetricsReport(
        cr=_mean([r for r, _ in corr]),
        mae=mae_value,
        npcr=_mean([100.0 * st.n_differ / st.n for st in stats]),
        psnr=_psnr_from_mse(mse_value),
        rmse=math.sqrt(mse_value),
        ssim=_mean([_channel_ssim(st) for st in stats]),
        uaci=100.0 * mae_value / MAX_VALUE,
        mse=mse_value,
        degenerate_cr=any(flag for _, flag in corr),
    )


@dataclass(frozen=True, eq=False)
class HistogramSet:
    """256-bin pixel counts, shape (channels, 256)."""

    counts: np.ndarray

    @property
    def n_channels(self):
        return self.counts.shape[0]

    def max_bin(self, channel=0):
        return int(self.counts[channel].max())

    def __eq__(self, other):
        if not isinstance(other, HistogramSet):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)


def histogram(img):
    counts = np.stack([np.bincount(p.flat, minlength=256) for p in img.channels]).astype(np.int64)
    return HistogramSet(counts)
