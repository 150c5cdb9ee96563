"""Command-line entry points: export from a checkpoint, build the toy fixture."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actexport",
        description="Export per-layer activations in the sscgraph NPY manifest format",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="export activations from a saved checkpoint")
    p.add_argument("--checkpoint", type=Path, required=True)
    p.add_argument("--layers", required=True, help="comma-separated layer selectors, in depth order")
    p.add_argument("--num-samples", type=int, default=300)
    p.add_argument("--flatten", choices=("full_flatten", "spatial_average"), default="full_flatten")
    p.add_argument("--epoch", type=int, help="override the checkpoint's epoch tag")
    p.add_argument("--pre-activation", action="store_true",
                   help="capture before the nonlinearity instead of after")
    p.add_argument("--out-dir", type=Path, default=Path("export"))
    p.set_defaults(handler=_cmd_export)

    p = sub.add_parser("toy-fixture", help="train the toy MLP and export its fixture bundle")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(handler=_cmd_toy_fixture)

    return parser


def _cmd_export(args) -> None:
    from .export import ExportSpec, export_activations

    spec = ExportSpec(
        checkpoint=args.checkpoint,
        layer_selectors=tuple(s.strip() for s in args.layers.split(",") if s.strip()),
        num_samples=args.num_samples,
        flatten=args.flatten,
        out_dir=args.out_dir,
        epoch=args.epoch,
        capture_point="pre" if args.pre_activation else "post",
    )
    manifest = export_activations(spec)
    print(manifest)


def _cmd_toy_fixture(args) -> None:
    from .export import build_toy_fixture

    manifest = build_toy_fixture(args.seed, args.out_dir)
    print(manifest)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary turns failures into exit codes
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
