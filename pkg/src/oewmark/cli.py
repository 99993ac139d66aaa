"""Command-line front end.

Exit codes: 0 success, 1 round-trip verification failure, 2 usage / I/O /
format errors, 3 message does not fit, 4 sidecar integrity failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import imagio
from .errors import (CrcMismatch, FormatError, InconsistentDimensions, InvalidBlueprint,
                     MessageTooLarge, RangeViolation, WatermarkError)
from .metrics import correlation, diff_stats, expected_psnr, psnr, quality_report
from .pipeline import embed, embed_multilayer, extract_message, extract_multilayer, recover_cover
from .pixel_core import BitMatrix, GrayImage

EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_SIZE = 3
EXIT_INTEGRITY = 4

# published PSNR (dB) for a 160x159 watermark, keyed by square cover side
REFERENCE_PSNR = {160: 51.1435, 256: 55.2127, 512: 61.2482, 720: 64.2111, 1080: 67.7214}
REFERENCE_MESSAGE = (160, 159)


class CliError(Exception):
    def __init__(self, msg, code=EXIT_USAGE):
        super().__init__(msg)
        self.code = code


def fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.4f}"


def emit(header, rows, out=None):
    out = out or sys.stdout
    print("# " + "\t".join(header), file=out)
    for row in rows:
        print("\t".join(str(v) for v in row), file=out)


def _read(path, reader):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return reader(data)
    except FormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _write(path, data: bytes):
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator seeded through SeedSequence([seed, *stream])."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def parse_size(text: str) -> tuple[int, int]:
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}") from None
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be positive, got {text!r}")
    return h, w


def parse_sides(text: str) -> list[int]:
    try:
        sides = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sides or min(sides) < 1:
        raise argparse.ArgumentTypeError(f"cover sides must be positive, got {text!r}")
    return sides


def cmd_embed(args) -> int:
    cover = _read(args.cover, imagio.read_graymap)
    messages = [_read(p, imagio.read_bitmap) for p in args.message]
    try:
        marked, stack = embed_multilayer(cover, messages)
    except MessageTooLarge as exc:
        raise CliError(f"{args.message[exc.layer]}: {exc}", EXIT_SIZE) from exc
    _write(args.out, imagio.write_graymap(marked))
    _write(args.sidecar, imagio.write_sidecar(stack))
    rep = quality_report(cover, marked)
    emit(["psnr", "max_abs_diff", "changed_pixels"],
         [(fmt(rep.psnr), rep.max_abs_diff, rep.changed_pixels)])
    return 0


def cmd_extract(args) -> int:
    marked = _read(args.watermarked, imagio.read_graymap)
    try:
        stack = _read(args.sidecar, imagio.read_sidecar)
    except CliError as exc:
        if isinstance(exc.__cause__, (CrcMismatch, InconsistentDimensions)):
            exc.code = EXIT_INTEGRITY
        raise
    if len(args.out_message) != len(stack):
        raise CliError(f"sidecar holds {len(stack)} layer(s) but {len(args.out_message)} "
                       "--out-message path(s) were given")
    try:
        messages, cover = extract_multilayer(marked, stack)
    except (RangeViolation, InvalidBlueprint) as exc:
        raise CliError(f"{args.sidecar}: {exc}", EXIT_INTEGRITY) from exc
    except WatermarkError as exc:
        raise CliError(f"{args.watermarked}: {exc}") from exc
    for path, msg in zip(args.out_message, messages):
        _write(path, imagio.write_bitmap(msg))
    _write(args.out_cover, imagio.write_graymap(cover))
    emit(["layer", "rows", "cols", "bits"],
         [(k + 1, m.rows, m.cols, m.rows * m.cols) for k, m in enumerate(messages)])
    return 0


def _read_any(path):
    try:
        head = Path(path).read_bytes()[:2]
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc
    if head == b"P5":
        return _read(path, imagio.read_graymap)
    if head == b"P4":
        return _read(path, imagio.read_bitmap)
    raise CliError(f"{path}: not a binary graymap (P5) or bitmap (P4)")


def cmd_metrics(args) -> int:
    a, b = _read_any(args.a), _read_any(args.b)
    if type(a) is not type(b):
        raise CliError("--a and --b must be the same format")
    if a.shape != b.shape:
        raise CliError(f"dimension mismatch: {a.shape} vs {b.shape}")
    is_gray = isinstance(a, GrayImage)
    kinds = [args.kind] if args.kind else (["psnr", "diff"] if is_gray else ["corr", "diff"])
    header, row = [], []
    try:
        for kind in kinds:
            if kind == "psnr":
                if not is_gray:
                    raise CliError("psnr needs graymap inputs")
                header.append("psnr")
                row.append(fmt(psnr(a, b)))
            elif kind == "corr":
                header.append("corr")
                row.append(fmt(correlation(a, b)))
            else:
                header += ["max_abs_diff", "changed_pixels"]
                row += list(diff_stats(a, b))
    except WatermarkError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}") from exc
    emit(header, [row])
    return 0


@dataclass(frozen=True)
class BenchRow:
    cover_side: int
    msg_rows: int
    msg_cols: int
    trials: int
    mean_psnr: float
    analytic_psnr: float
    reference_psnr: float | None
    correlation: float

    def fields(self):
        ref = "-" if self.reference_psnr is None else fmt(self.reference_psnr)
        return (self.cover_side, self.msg_rows, self.msg_cols, self.trials,
                fmt(self.mean_psnr), fmt(self.analytic_psnr), ref, fmt(self.correlation))


BENCH_HEADER = ["cover_side", "msg_rows", "msg_cols", "trials", "mean_psnr",
                "analytic_psnr", "reference_psnr", "correlation"]


class VerificationFailure(Exception):
    pass


def bench_side(side: int, msg_shape: tuple[int, int], trials: int, seed: int) -> BenchRow:
    """Seeded embed + full round-trip trials on random side x side covers."""
    r, c = msg_shape
    psnrs, corrs = [], []
    for t in range(trials):
        rng = rng_for(seed, side, t)
        cover = GrayImage(rng.integers(0, 256, size=(side, side), dtype=np.uint8))
        msg = BitMatrix(rng.integers(0, 2, size=(r, c), dtype=np.uint8))
        res = embed(cover, msg)
        got = extract_message(res.watermarked, r, c)
        back = recover_cover(res.watermarked, res.blueprint)
        if got != msg or back != cover:
            raise VerificationFailure(f"round trip failed: side {side}, trial {t}, seed {seed}")
        psnrs.append(psnr(cover, res.watermarked))
        corrs.append(correlation(msg, got))
    ref = REFERENCE_PSNR.get(side) if (r, c) == REFERENCE_MESSAGE else None
    return BenchRow(side, r, c, trials, float(np.mean(psnrs)),
                    expected_psnr(side, side, r, c), ref, min(corrs))


def cmd_bench(args) -> int:
    r, c = args.message
    if args.trials < 1:
        raise CliError("--trials must be at least 1")
    if args.seed < 0:
        raise CliError("--seed must be non-negative")
    for side in args.cover_sides:
        if r > side or c > side - 1:
            raise CliError(f"{r}x{c} message does not fit a {side}x{side} cover")
    try:
        rows = [bench_side(side, (r, c), args.trials, args.seed) for side in args.cover_sides]
    except VerificationFailure as exc:
        raise CliError(str(exc), EXIT_VERIFY) from exc
    emit(BENCH_HEADER, [row.fields() for row in rows])
    if args.figure:
        from .report import plot_bench
        try:
            plot_bench(rows, args.figure, (r, c))
        except OSError as exc:
            raise CliError(f"{args.figure}: {exc}") from exc
    return 0


def generate(kind: str, h: int, w: int, seed: int = 0) -> GrayImage:
    if kind == "noise":
        return GrayImage(rng_for(seed).integers(0, 256, size=(h, w), dtype=np.uint8))
    if kind == "gradient":
        i, j = np.indices((h, w))
        return GrayImage((i + j) % 256)
    if kind == "constant":
        return GrayImage(np.full((h, w), 128, dtype=np.uint8))
    raise ValueError(f"unknown kind {kind!r}")


def cmd_gen(args) -> int:
    h, w = args.size
    if args.seed < 0:
        raise CliError("--seed must be non-negative")
    _write(args.out, imagio.write_graymap(generate(args.kind, h, w, args.seed)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oewmark",
                                description="Reversible odd-even parity watermarking.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("embed", help="embed one or more message layers into a cover")
    e.add_argument("--cover", required=True)
    e.add_argument("--message", required=True, action="append",
                   help="P4 bitmap; repeat for multi-layer embedding (order = layer order)")
    e.add_argument("--out", required=True)
    e.add_argument("--sidecar", required=True)
    e.set_defaults(func=cmd_embed)

    x = sub.add_parser("extract", help="recover messages and the original cover")
    x.add_argument("--watermarked", required=True)
    x.add_argument("--sidecar", required=True)
    x.add_argument("--out-message", required=True, action="append")
    x.add_argument("--out-cover", required=True)
    x.set_defaults(func=cmd_extract)

    m = sub.add_parser("metrics", help="compare two graymaps or two bitmaps")
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--kind", choices=["psnr", "corr", "diff"])
    m.set_defaults(func=cmd_metrics)

    b = sub.add_parser("bench", help="seeded PSNR benchmark over square covers")
    b.add_argument("--cover-sides", type=parse_sides, default=sorted(REFERENCE_PSNR))
    b.add_argument("--message", type=parse_size, default=REFERENCE_MESSAGE, help="RxC")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--figure", help="also render a PSNR-vs-cover-size plot to this file")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a synthetic graymap")
    g.add_argument("--kind", choices=["noise", "gradient", "constant"], required=True)
    g.add_argument("--size", type=parse_size, required=True, help="HxW")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"oewmark {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
