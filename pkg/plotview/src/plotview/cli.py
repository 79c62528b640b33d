"""Command line entry point: render figures from a results directory."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import compose, save
from .reader import PlotviewError, read_results

EXTENSIONS = {"raster": "png", "vector": "svg"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotview",
        description="render comparison figures from a linepack results directory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="write one two-panel figure per boundary kind")
    render.add_argument("results_dir", help="directory holding the variant CSV files")
    render.add_argument("--out", help="output directory (default: <results_dir>/figures)")
    render.add_argument(
        "--format",
        choices=sorted(EXTENSIONS),
        default="raster",
        help="raster writes PNG, vector writes SVG",
    )
    return parser


def _cmd_render(args) -> int:
    bundles, warnings = read_results(args.results_dir)
    out_dir = Path(args.out) if args.out else Path(args.results_dir) / "figures"
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = EXTENSIONS[args.format]
    for kind in sorted(bundles):
        path = out_dir / f"{kind}_comparison.{ext}"
        save(compose(bundles[kind]), path, args.format)
        print(f"wrote {path}")
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)
    return 1 if warnings else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _cmd_render(args)
    except PlotviewError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
