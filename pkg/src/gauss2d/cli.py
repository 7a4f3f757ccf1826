"""Command-line entry point.

Exit codes:
    0  success
    1  a check failed (error-report bound exceeded) or unexpected error
    2  usage error (unknown flag, bad flag combination)
    3  input file missing or unreadable
    4  malformed input image
    5  unsupported configuration (sigma, latency, dimensions)
    6  output could not be written
"""

from __future__ import annotations

import argparse
import sys

from . import netpbm
from .blur import BOUNDARIES, MODES, THREADS_ENV, ConvConfig, benchmark, blur, generator_benchmark
from .datapath import DEFAULT_SIGMAS, ConfigError, Latencies, MULT_LATENCY_RANGE, default_lut
from .files import atomic_write
from .generator import KernelSpec, generate_all_scales, normalize
from .oracle import ERROR_BOUNDS, error_report, oracle_tile
from .rom import DEFAULT_ROM
from .vectors import FORMATS, ExportError, export_vectors

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NO_INPUT = 3
EXIT_BAD_IMAGE = 4
EXIT_CONFIG = 5
EXIT_OUTPUT = 6


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class OutputError(Exception):
    pass


def _latency(s: str) -> int:
    v = int(s)
    lo, hi = MULT_LATENCY_RANGE
    if not lo <= v <= hi:
        raise argparse.ArgumentTypeError(f"latency must be in {lo}..{hi}")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _spec_args(p):
    p.add_argument("--rows", type=_positive, default=256, help="kernel rows (default 256)")
    p.add_argument("--cols", type=_positive, default=256, help="kernel columns (default 256)")
    p.add_argument("--latency", type=_latency, default=5,
                   help="multiplier pipeline depth, 5..8 (default 5)")


def _sigma_list(args) -> list[int]:
    return args.sigma or list(DEFAULT_SIGMAS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gauss2d",
        description="Golden model of a pipelined 2D Gaussian surround function datapath.",
        epilog=f"Set {THREADS_ENV} to cap worker threads.",
    )
    ap.add_argument("--dump-rom", action="store_true", help="same as the rom-dump subcommand")
    ap.add_argument("--dump-explut", action="store_true", help="same as the explut-dump subcommand")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("kernel", help="generate surround tiles; export PGM/CSV")
    _spec_args(p)
    p.add_argument("--sigma", type=int, action="append", help="scale (repeatable; default 16, 64, 128)")
    p.add_argument("--out", help="PGM path; may contain {sigma}")
    p.add_argument("--csv", help="CSV path; may contain {sigma}")

    p = sub.add_parser("rom-dump", help="print the 256-word coordinate ROM")
    p.add_argument("--out", help="write to file instead of stdout")

    p = sub.add_parser("explut-dump", help="print the exponent lookup table as CSV")
    p.add_argument("--out", help="write to file instead of stdout")

    p = sub.add_parser("blur", help="blur a PGM/PPM image")
    p.add_argument("--in", dest="inp", required=True, help="input P5/P6 image")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--sigma", type=int, default=16)
    p.add_argument("--boundary", choices=sorted(BOUNDARIES), default="replicate")
    p.add_argument("--mode", choices=MODES, default="separable")
    p.add_argument("--no-normalize", action="store_true", help="skip unit-gain normalization")
    p.add_argument("--threads", type=_positive)

    p = sub.add_parser("error-report", help="compare the bit model against the float oracle")
    _spec_args(p)
    p.add_argument("--sigma", type=int, action="append", help="scale (repeatable; default 16, 64, 128)")

    p = sub.add_parser("bench", help="blur or raw-generator throughput")
    p.add_argument("--width", type=_positive, default=1600)
    p.add_argument("--height", type=_positive, default=1200)
    p.add_argument("--channels", type=int, choices=(1, 3), default=3)
    p.add_argument("--sigma", type=int, default=16)
    p.add_argument("--boundary", choices=sorted(BOUNDARIES), default="replicate")
    p.add_argument("--mode", choices=MODES, default="separable")
    p.add_argument("--frames", type=int, default=30)
    p.add_argument("--threads", type=_positive)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generator", action="store_true",
                   help="measure raw gout streaming instead of image blur")

    p = sub.add_parser("vectors", help="export per-tick HDL test vectors")
    _spec_args(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", choices=FORMATS, action="append", help="hex and/or csv (default hex)")
    return ap


def _emit(lines, out):
    text = "\n".join(lines) + "\n"
    if out:
        try:
            atomic_write(out, text.encode("ascii"))
        except OSError as e:
            raise OutputError(f"cannot write {out}: {e}") from e
    else:
        sys.stdout.write(text)


def _expand(template: str | None, sigma: int, many: bool) -> str | None:
    if template is None:
        return None
    if "{sigma}" in template:
        return template.replace("{sigma}", str(sigma))
    if many:
        raise UsageError("several sigmas need a {sigma} placeholder in output paths")
    return template


def cmd_kernel(args) -> int:
    sigmas = _sigma_list(args)
    for t in (args.out, args.csv):
        if t and len(sigmas) > 1 and "{sigma}" not in t:
            raise UsageError("several sigmas need a {sigma} placeholder in output paths")
    spec = KernelSpec(args.rows, args.cols, tuple(sigmas))
    tiles, report = generate_all_scales(spec, Latencies(mult=args.latency))
    many = len(sigmas) > 1
    for tile in tiles:
        k = normalize(tile)
        print(f"sigma={tile.sigma} size={spec.rows}x{spec.cols} center={tile.at(0, 0)} "
              f"k_raw={k.k_raw} total_ticks={report.total_ticks} sha256={tile.digest()}")
        pgm = _expand(args.out, tile.sigma, many)
        if pgm:
            try:
                netpbm.write(pgm, netpbm.Image(tile.data))
            except OSError as e:
                raise OutputError(f"cannot write {pgm}: {e}") from e
        csv = _expand(args.csv, tile.sigma, many)
        if csv:
            _emit([",".join(str(int(v)) for v in row) for row in tile.data], csv)
    return EXIT_OK


def cmd_rom_dump(args) -> int:
    _emit(DEFAULT_ROM.dump_lines(), getattr(args, "out", None))
    return EXIT_OK


def cmd_explut_dump(args) -> int:
    _emit(default_lut().csv_lines(), getattr(args, "out", None))
    return EXIT_OK


def cmd_blur(args) -> int:
    cfg = ConvConfig(args.sigma, args.boundary, args.mode, not args.no_normalize)
    try:
        img = netpbm.read(args.inp)
    except OSError as e:
        raise InputError(f"cannot read {args.inp}: {e}") from e
    out = blur(img, cfg, threads=args.threads)
    try:
        netpbm.write(args.out, out)
    except OSError as e:
        raise OutputError(f"cannot write {args.out}: {e}") from e
    print(f"{args.out}: {out.width}x{out.height}x{out.channels} sigma={cfg.sigma} "
          f"mode={cfg.mode} boundary={cfg.boundary}")
    return EXIT_OK


def cmd_error_report(args) -> int:
    sigmas = _sigma_list(args)
    spec = KernelSpec(args.rows, args.cols, tuple(sigmas))
    tiles, _ = generate_all_scales(spec, Latencies(mult=args.latency))
    status = EXIT_OK
    for tile in tiles:
        raw, normed = oracle_tile(spec, tile.sigma)
        rep = error_report(tile, raw)
        bound = ERROR_BOUNDS.get(tile.sigma)
        verdict = "n/a" if bound is None else ("PASS" if rep.max_abs <= bound else "FAIL")
        if verdict == "FAIL":
            status = EXIT_FAIL
        bound_s = "none" if bound is None else f"{bound:.8f}"
        print(f"sigma={tile.sigma} max_abs={rep.max_abs:.8f} ({rep.as_lsb():.3f} LSB) "
              f"rmse={rep.rmse:.8f} argmax={rep.argmax} bound={bound_s} "
              f"oracle_norm_sum={normed.sum():.15f} {verdict}")
    return status


def cmd_bench(args) -> int:
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    if args.generator:
        r = generator_benchmark(args.frames)
        print(f"generator frames={r.frames} seconds={r.seconds:.4f} "
              f"samples_per_sec={r.samples_per_sec:.0f} frames_per_sec={r.frames_per_sec:.1f}")
        return EXIT_OK
    cfg = ConvConfig(args.sigma, args.boundary, args.mode)
    r = benchmark(args.width, args.height, args.channels, cfg, args.frames, args.threads, args.seed)
    print(f"blur {args.width}x{args.height}x{args.channels} sigma={cfg.sigma} mode={cfg.mode} "
          f"frames={r.frames} seconds={r.seconds:.4f} samples_per_sec={r.samples_per_sec:.0f} "
          f"frames_per_sec={r.frames_per_sec:.2f} sha256={r.digest}")
    return EXIT_OK


def cmd_vectors(args) -> int:
    spec = KernelSpec(args.rows, args.cols)
    try:
        summary = export_vectors(spec, args.out_dir, args.format or ["hex"], Latencies(mult=args.latency))
    except ExportError as e:
        raise OutputError(str(e)) from e
    for name, digest in summary.files.items():
        print(f"{name}\t{digest}")
    print(f"records={summary.records} total_ticks={summary.total_ticks} manifest={summary.manifest}")
    return EXIT_OK


COMMANDS = {
    "kernel": cmd_kernel,
    "rom-dump": cmd_rom_dump,
    "explut-dump": cmd_explut_dump,
    "blur": cmd_blur,
    "error-report": cmd_error_report,
    "bench": cmd_bench,
    "vectors": cmd_vectors,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    chosen = [n for n, flag in (("rom-dump", args.dump_rom), ("explut-dump", args.dump_explut)) if flag]
    if args.command:
        chosen.append(args.command)
    if len(chosen) != 1:
        parser.print_usage(sys.stderr)
        print("gauss2d: error: exactly one command is required", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[chosen[0]](args)
    except UsageError as e:
        print(f"gauss2d: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print(f"gauss2d: error: {e}", file=sys.stderr)
        return EXIT_NO_INPUT
    except netpbm.ImageFormatError as e:
        print(f"gauss2d: error: malformed image: {e}", file=sys.stderr)
        return EXIT_BAD_IMAGE
    except OutputError as e:
        print(f"gauss2d: error: {e}", file=sys.stderr)
        return EXIT_OUTPUT
    except ConfigError as e:
        print(f"gauss2d: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"gauss2d: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
