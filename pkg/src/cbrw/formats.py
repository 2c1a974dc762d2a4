"""On-disk formats: binary PGM/PPM images, key files and metric reports.

Key file layout (all integers little-endian)::

    offset  size  field
    0       4     magic b"CBRW"
    4       1     version (1)
    5       1     generator id (1 = splitmix64)
    6       1     channels (1 or 3)
    7       4     width  (u32)
    11      4     height (u32)
    15      8     seed (u64)
    23      4     offset bound (u32)
    27      4*N   offsets, i32, channel-major then row-major

Decoders never guess: anything unexpected raises :class:`FormatError`.
Concurrent writes to the same path are not coordinated.
"""
import csv
import hashlib
import io
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import REPORT_FIELDS, MetricsReport
from .pixel import RasterImage
from .rwm import GENERATORS, MAX_OFFSET_BOUND, OffsetGrid

KEY_MAGIC = b"CBRW"
KEY_VERSION = 1
_KEY_HEADER = struct.Struct("<4sBBBIIQI")

CSV_HEADER = ("image", "method") + REPORT_FIELDS
AVERAGE_LABEL = "AVERAGE"
ERROR_METHOD = "ERROR"


class FormatError(ValueError):
    """Malformed or unsupported file content; ``offset`` is the byte position."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


# ---------------------------------------------------------------------------
# PGM / PPM

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _next_token(data, pos):
    """Read one ASCII header token, skipping whitespace and # comments."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c in _WHITESPACE and c:
            pos += 1
        elif c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise FormatError("truncated header", start)
    return data[start:pos], start, pos


def _header_int(data, pos, name):
    tok, start, pos = _next_token(data, pos)
    if not tok.isdigit():
        raise FormatError(f"{name} is not a decimal integer: {tok[:16]!r}", start)
    return int(tok), start, pos


def decode_image(data):
    """Decode a binary PGM (P5) or PPM (P6) byte string with maxval 255."""
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FormatError(f"unsupported magic {magic!r}; expected P5 or P6", 0)
    pos = 2
    if len(data) <= pos or data[pos : pos + 1] not in _WHITESPACE:
        raise FormatError("missing whitespace after magic", pos)
    width, start, pos = _header_int(data, pos, "width")
    if width < 1:
        raise FormatError("width must be positive", start)
    height, start, pos = _header_int(data, pos, "height")
    if height < 1:
        raise FormatError("height must be positive", start)
    maxval, start, pos = _header_int(data, pos, "maxval")
    if maxval != 255:
        raise FormatError(f"maxval {maxval} unsupported; only 255", start)
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise FormatError("missing single whitespace before raster", pos)
    pos += 1
    expected = width * height * channels
    payload = data[pos:]
    if len(payload) < expected:
        raise FormatError(
            f"truncated raster: {len(payload)} of {expected} bytes", pos + len(payload)
        )
    if len(payload) > expected:
        raise FormatError(f"{len(payload) - expected} trailing bytes after raster", pos + expected)
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return RasterImage.from_array(arr.reshape(height, width))
    return RasterImage.from_array(arr.reshape(height, width, 3))


def encode_image(img):
    magic = b"P5" if img.n_channels == 1 else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    return header + np.ascontiguousarray(img.to_array()).tobytes()


def read_image(path):
    return decode_image(Path(path).read_bytes())


def write_image(img, path):
    Path(path).write_bytes(encode_image(img))


# ---------------------------------------------------------------------------
# Key files


def encode_key(key):
    header = _KEY_HEADER.pack(
        KEY_MAGIC,
        KEY_VERSION,
        key.generator_id,
        key.channels,
        key.width,
        key.height,
        key.seed,
        key.offset_bound,
    )
    return header + key.offsets.astype("<i4").tobytes()


def decode_key(data):
    if len(data) < _KEY_HEADER.size:
        raise FormatError(f"truncated key header: {len(data)} of {_KEY_HEADER.size} bytes", len(data))
    magic, version, gen, channels, width, height, seed, bound = _KEY_HEADER.unpack_from(data)
    if magic != KEY_MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != KEY_VERSION:
        raise FormatError(f"unsupported key version {version}", 4)
    if gen not in GENERATORS:
        raise FormatError(f"unknown generator id {gen}", 5)
    if channels not in (1, 3):
        raise FormatError(f"invalid channel count {channels}", 6)
    if width < 1:
        raise FormatError("width must be positive", 7)
    if height < 1:
        raise FormatError("height must be positive", 11)
    if not 1 <= bound <= MAX_OFFSET_BOUND:
        raise FormatError(f"invalid offset bound {bound}", 23)
    count = channels * width * height
    body = data[_KEY_HEADER.size :]
    if len(body) != 4 * count:
        kind = "truncated" if len(body) < 4 * count else "oversized"
        raise FormatError(f"{kind} offsets: {len(body)} of {4 * count} bytes", _KEY_HEADER.size + min(len(body), 4 * count))
    offsets = np.frombuffer(body, dtype="<i4").astype(np.int64)
    bad = np.flatnonzero(np.abs(offsets) > bound)
    if bad.size:
        raise FormatError(
            f"offset {offsets[bad[0]]} outside ±{bound}", _KEY_HEADER.size + 4 * int(bad[0])
        )
    return OffsetGrid(
        width=width,
        height=height,
        channels=channels,
        offsets=offsets.reshape(channels, height, width),
        seed=seed,
        offset_bound=bound,
        generator_id=gen,
    )


def write_key(key, path):
    Path(path).write_bytes(encode_key(key))


def read_key(path):
    return decode_key(Path(path).read_bytes())


def key_fingerprint(key):
    """16-hex-digit (64-bit) BLAKE2b digest of the serialized key."""
    return hashlib.blake2b(encode_key(key), digest_size=8).hexdigest()


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class ReportRow:
    image: str
    method: str
    report: MetricsReport | None = None
    error: str | None = None


def summarize(rows):
    """Arithmetic mean of each field over successful rows.

    Infinite PSNR values are left out of the PSNR mean and counted in
    ``psnr_infinite_count``; if every PSNR is infinite the mean is infinite.
    """
    ok = [r.report for r in rows if r.report is not None]
    summary = {"count": len(ok), "errors": len(rows) - len(ok)}
    for field in REPORT_FIELDS:
        values = [getattr(rep, field) for rep in ok]
        if field == "psnr":
            finite = [v for v in values if not math.isinf(v)]
            summary["psnr_infinite_count"] = len(values) - len(finite)
            if finite:
                summary[field] = math.fsum(finite) / len(finite)
            else:
                summary[field] = math.inf if values else math.nan
        else:
            summary[field] = math.fsum(values) / len(values) if values else math.nan
    return summary


def _fmt(value):
    if math.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    if math.isnan(value):
        return ""
    text = f"{value:.4f}"
    return "0.0000" if text == "-0.0000" else text


def _common_method(rows):
    methods = {r.method for r in rows if r.report is not None}
    return methods.pop() if len(methods) == 1 else "mixed"


def render_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        if row.report is None:
            writer.writerow([row.image, ERROR_METHOD] + [""] * len(REPORT_FIELDS))
        else:
            writer.writerow([row.image, row.method] + [_fmt(getattr(row.report, f)) for f in REPORT_FIELDS])
    summary = summarize(rows)
    writer.writerow([AVERAGE_LABEL, _common_method(rows)] + [_fmt(summary[f]) for f in REPORT_FIELDS])
    return buf.getvalue()


def _json_number(value):
    if math.isinf(value) or math.isnan(value):
        return None
    return value


def render_json(rows):
    out_rows = []
    for row in rows:
        entry = {"image": row.image, "method": row.method if row.report else ERROR_METHOD}
        if row.report is not None:
            entry.update({f: _json_number(getattr(row.report, f)) for f in REPORT_FIELDS})
            entry["mse"] = row.report.mse
            entry["degenerate_cr"] = row.report.degenerate_cr
        else:
            entry["error"] = row.error
        out_rows.append(entry)
    summary = summarize(rows)
    doc = {
        "rows": out_rows,
        "summary": {
            "image": AVERAGE_LABEL,
            "method": _common_method(rows),
            **{f: _json_number(summary[f]) for f in REPORT_FIELDS},
            "psnr_infinite_count": summary["psnr_infinite_count"],
            "count": summary["count"],
            "errors": summary["errors"],
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def write_report(rows, path, fmt="csv"):
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_cell(text):
    if text == "":
        return None
    if text in ("Inf", "-Inf"):
        return math.inf if text == "Inf" else -math.inf
    return float(text)


def read_report_csv(path):
    """Parse a CSV report into ``(rows, average)``; each is a dict keyed by column."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty report") from None
        if tuple(header) != CSV_HEADER:
            raise FormatError(f"unexpected report header {header}")
        rows, average = [], None
        for line_no, record in enumerate(reader, start=2):
            if len(record) != len(CSV_HEADER):
                raise FormatError(f"line {line_no}: expected {len(CSV_HEADER)} cells, got {len(record)}")
            entry = {"image": record[0], "method": record[1]}
            entry.update({f: _parse_cell(v) for f, v in zip(REPORT_FIELDS, record[2:])})
            if record[0] == AVERAGE_LABEL:
                average = entry
            else:
                rows.append(entry)
    if average is None:
        raise FormatError("report has no AVERAGE row")
    return rows, average
