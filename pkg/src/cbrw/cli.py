"""Command-line front end.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""
import argparse
import concurrent.futures
import hashlib
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .formats import ReportRow, key_fingerprint, read_image, read_key, write_image, write_key, write_report
from .metrics import evaluate_pair, histogram
from .rwm import MAX_OFFSET_BOUND, generate_offset_grid
from .template import Method, enroll

log = logging.getLogger("cbrw")

CHANNEL_NAMES = {1: ("gray",), 3: ("R", "G", "B")}


def _positive_int(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _bound(text):
    value = _positive_int(text)
    if value > MAX_OFFSET_BOUND:
        raise argparse.ArgumentTypeError(f"must be at most {MAX_OFFSET_BOUND}")
    return value


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _method(text):
    try:
        return Method.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def filename_hash(name):
    """Stable unsigned 64-bit hash of a file name."""
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest(), "little")


def derive_seed(base_seed, filename):
    """Per-image seed: base XOR the stable hash of the file's base name."""
    return base_seed ^ filename_hash(Path(filename).name)


def thread_count():
    raw = os.environ.get("CBRW_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CBRW_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("CBRW_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# commands


def cmd_keygen(args):
    if args.like is not None:
        ref = read_image(args.like)
        width, height, channels = ref.width, ref.height, ref.n_channels
    else:
        width, height, channels = args.width, args.height, args.channels
    key = generate_offset_grid(width, height, channels, seed=args.seed, offset_bound=args.bound)
    write_key(key, args.out)
    print(f"{args.out}: {width}x{height}x{channels} bound=±{key.offset_bound} "
          f"seed={key.seed} fingerprint={key_fingerprint(key)}")
    return 0


def cmd_enroll(args):
    image = read_image(args.image)
    key = read_key(args.key)
    template = enroll(image, key, args.method)
    write_image(template.image, args.out)
    print(f"{args.out}: method={template.method} key={template.key_fingerprint}")
    return 0


def cmd_evaluate(args):
    original = read_image(args.original)
    template = read_image(args.template)
    report = evaluate_pair(original, template)
    row = ReportRow(Path(args.original).name, args.method, report)
    write_report([row], args.out, args.format)
    return 0


def _batch_one(path, args):
    seed = args.seed if args.single_key else derive_seed(args.seed, path.name)
    try:
        image = read_image(path)
        key = generate_offset_grid(image.width, image.height, image.n_channels,
                                   seed=seed, offset_bound=args.bound)
        template = enroll(image, key, args.method)
        if args.out_dir is not None:
            write_image(template.image, Path(args.out_dir) / f"{path.stem}.{args.method}{path.suffix}")
        return ReportRow(path.name, str(args.method), evaluate_pair(image, template.image))
    except (ValueError, OSError) as exc:
        return ReportRow(path.name, str(args.method), None, f"{type(exc).__name__}: {exc}")


def cmd_batch(args):
    input_dir = Path(args.input_dir)
    if not input_dir.is_dir():
        raise ValueError(f"not a directory: {input_dir}")
    paths = sorted((p for p in input_dir.glob(args.glob) if p.is_file()), key=lambda p: p.name)
    if not paths:
        raise ValueError(f"no files match {args.glob!r} in {input_dir}")
    if args.out_dir is not None:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    workers = min(thread_count(), len(paths))
    if workers == 1:
        rows = [_batch_one(p, args) for p in paths]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _batch_one(p, args), paths))
    rows.sort(key=lambda r: r.image)
    write_report(rows, args.report, args.format)
    failed = [r for r in rows if r.error is not None]
    for row in failed:
        print(f"cbrw: {row.image}: {row.error}", file=sys.stderr)
    print(f"{args.report}: {len(rows) - len(failed)} evaluated, {len(failed)} failed")
    return 1 if failed else 0


def cmd_diversity(args):
    image = read_image(args.image)
    templates = []
    for seed in (args.seed_a, args.seed_b):
        key = generate_offset_grid(image.width, image.height, image.n_channels,
                                   seed=seed, offset_bound=args.bound)
        templates.append(enroll(image, key, args.method).image)
    report = evaluate_pair(*templates)
    write_report([ReportRow(Path(args.image).name, str(args.method), report)], args.out, args.format)
    return 0


def _write_histogram_csv(hist, path):
    names = CHANNEL_NAMES[hist.n_channels]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("channel,bin,count\n")
        for c, name in enumerate(names):
            for b, count in enumerate(hist.counts[c]):
                fh.write(f"{name},{b},{int(count)}\n")


def cmd_histogram(args):
    image = read_image(args.image)
    hist = histogram(image)
    _write_histogram_csv(hist, args.out)
    if args.template is not None:
        other = histogram(read_image(args.template))
        if other.n_channels != hist.n_channels:
            raise ValueError("template and image have different channel counts")
        for c, name in enumerate(CHANNEL_NAMES[hist.n_channels]):
            a, b = hist.max_bin(c), other.max_bin(c)
            verdict = "attenuated" if b <= a else "not attenuated"
            print(f"{name}: original max bin {a}, template max bin {b} ({verdict})")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cbrw",
        description="Cancelable biometric templates via 1-D random walk, and template quality metrics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("keygen", help="generate a random offset key file")
    p.add_argument("--width", type=_positive_int)
    p.add_argument("--height", type=_positive_int)
    p.add_argument("--channels", type=int, choices=(1, 3), default=1)
    p.add_argument("--like", metavar="IMAGE", help="take width/height/channels from an image")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--bound", type=_bound, default=None,
                   help="offsets are drawn from [-bound, bound] (default: half the pixel count)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("enroll", help="issue a template for an image under a key")
    p.add_argument("--image", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--method", type=_method, default=Method.BITXOR, help="xor or cmp")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("evaluate", help="compare an original image with a template")
    p.add_argument("--original", required=True)
    p.add_argument("--template", required=True)
    p.add_argument("--method", default="-", help="label for the method column")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("batch", help="enroll and evaluate every image in a directory")
    p.add_argument("--input-dir", required=True)
    p.add_argument("--glob", default="*.p[gp]m")
    p.add_argument("--method", type=_method, default=Method.BITXOR)
    p.add_argument("--seed", type=_seed, default=0, help="base seed")
    p.add_argument("--single-key", action="store_true",
                   help="use the base seed for every image instead of a per-file derived seed")
    p.add_argument("--bound", type=_bound, default=None)
    p.add_argument("--out-dir", help="also write templates here")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("diversity", help="compare two templates of one image under two seeds")
    p.add_argument("--image", required=True)
    p.add_argument("--seed-a", type=_seed, required=True)
    p.add_argument("--seed-b", type=_seed, required=True)
    p.add_argument("--bound", type=_bound, default=None)
    p.add_argument("--method", type=_method, default=Method.BITXOR)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("histogram", help="export 256-bin histograms as CSV")
    p.add_argument("--image", required=True)
    p.add_argument("--template", help="also report max-bin attenuation against this template")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_histogram)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "keygen" and args.like is None and (args.width is None or args.height is None):
        parser.error("keygen needs --width and --height, or --like IMAGE")
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"cbrw: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
