"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 format error, 3 capacity error,
4 corrupt stego.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import algorithms, bench, chisquare, engine, metrics
from .errors import StegoError
from .image_io import load, write_pnm
from .lucas import decompose, low7
from .syndrome import solve_table_csv, syndrome, syndrome_table

EXIT_OK, EXIT_USAGE = 0, 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _add_stego_flags(p):
    p.add_argument("--algo", choices=sorted(algorithms.ALGORITHMS), default="lucas")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--traversal", choices=engine.TRAVERSALS, default="permuted")


def cmd_embed(args) -> int:
    cover = load(args.cover)
    message = Path(args.message).read_bytes()
    algo = algorithms.get(args.algo)
    stego, log = algo.run_embed(cover, message, args.seed, args.traversal)
    _atomic_write(args.out, write_pnm(stego))
    bits = 8 * len(message)
    report = metrics.quality_report(cover, stego, bits or None, changed=len(log))
    sidecar = {
        "algorithm": args.algo,
        "seed": args.seed,
        "traversal": args.traversal,
        "payload_bits": bits,
        "header_bits": engine.HEADER_BITS,
        "changed_samples": len(log),
        "psnr_db": None if math.isinf(report.psnr_db) else report.psnr_db,
    }
    _atomic_write(f"{args.out}.json", (json.dumps(sidecar, indent=2) + "\n").encode())
    print(f"embedded {bits} bits, changed {len(log)} of {cover.num_samples} samples")
    return EXIT_OK


def cmd_extract(args) -> int:
    stego = load(args.stego)
    message = algorithms.get(args.algo).run_extract(stego, args.seed, args.traversal)
    _atomic_write(args.out, message)
    print(f"extracted {len(message)} bytes")
    return EXIT_OK


def cmd_inspect(args) -> int:
    if args.value is not None:
        if not 0 <= args.value <= 255:
            print(f"error: value must be in 0..255, got {args.value}", file=sys.stderr)
            return EXIT_USAGE
        bits = decompose(args.value)
        b = low7(bits)
        print(f"value     {args.value}")
        print(f"lucas     {bits}")
        print(f"low7      {b:07b}")
        print(f"syndrome  {syndrome(b):03b}")
        return EXIT_OK
    image = load(args.image)
    counts = np.bincount(syndrome_table()[image.samples], minlength=8)
    print(f"size      {image.cols}x{image.rows}, {image.channels} channel(s)")
    print(f"samples   {image.num_samples}")
    for name, algo in algorithms.ALGORITHMS.items():
        print(f"capacity  {name:<6} {algo.capacity(image)} bits ({algo.usable_bits(image)} usable)")
    print("syndromes " + " ".join(f"{t:03b}:{int(c)}" for t, c in enumerate(counts)))
    return EXIT_OK


def cmd_analyze(args) -> int:
    image = load(args.image)
    text = chisquare.curve_csv(chisquare.chi_square_curve(image, args.steps))
    if args.out:
        _atomic_write(args.out, text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_metrics(args) -> int:
    report = metrics.quality_report(load(args.cover), load(args.stego), args.bits)
    if args.json:
        d = report.as_dict()
        d["psnr_db"] = "inf" if math.isinf(d["psnr_db"]) else d["psnr_db"]
        d["rate_per_bit"] = None if math.isnan(d["rate_per_bit"]) else d["rate_per_bit"]
        print(json.dumps(d, indent=2))
    else:
        print(metrics.format_report(report))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        config = bench.BenchConfig.from_json(args.config)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: bad bench config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        config.output_dir = args.out
    result = bench.run_bench(config)
    failed = sum(not r.ok for r in result.rows)
    print(f"{len(result.rows)} cells ({failed} failed) written to {config.output_dir}")
    return EXIT_OK


def cmd_solve_table(args) -> int:
    text = solve_table_csv()
    if args.out:
        _atomic_write(args.out, text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lucastego", description="Lucas-number syndrome steganography toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a message file in a PGM/PPM cover")
    p.add_argument("--cover", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out", required=True)
    _add_stego_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a message from a stego image")
    p.add_argument("--stego", required=True)
    p.add_argument("--out", required=True)
    _add_stego_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("inspect", help="show Lucas decomposition and syndrome")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--value", type=int)
    g.add_argument("--image")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("analyze", help="chi-square prefix curve as CSV")
    p.add_argument("--image", required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("metrics", help="MSE / PSNR / modification rate between two images")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.add_argument("--bits", type=int, help="embedded payload bits, for the per-bit rate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="run a benchmark matrix from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the config's output directory")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("solve-table", help="dump the 256x8 embedding table as CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "steps", 1) < 1:
        print("error: --steps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except StegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
