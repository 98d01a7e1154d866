"""Command-line entry point: ``generate``, ``stats``, ``resolve``, ``validate``.

Exit status is 0 on success, 1 on a validation error, 2 on an I/O or
parse error. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from refgen.annotations import parse_annotations, parse_detections
from refgen.config import load_config
from refgen.dataset import compute_stats, read_dataset, write_dataset
from refgen.errors import ParseError, ValidationError
from refgen.expression import parse_expression
from refgen.generator import generate_dataset, resolve_workers
from refgen.resolver import resolve

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _cmd_generate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    annotations = parse_annotations(args.annotations)
    detections = parse_detections(args.detections, config.color_lexicon) if args.detections else {}
    report = generate_dataset(
        annotations, detections, config.cue, config.color_lexicon, workers=resolve_workers(args.threads)
    )
    records = report.expressions
    write_dataset(records, args.out)
    print(
        f"wrote {report.emitted} expressions ({report.fallbacks} fallback) to {args.out}",
        file=sys.stderr,
    )
    if args.summary:
        print(json.dumps(compute_stats(records, annotations).to_dict(), indent=2))
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    annotations = parse_annotations(args.annotations)
    records = read_dataset(args.dataset)
    print(json.dumps(compute_stats(records, annotations).to_dict(), indent=2))
    return EXIT_OK


def _cmd_resolve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    annotations = parse_annotations(args.annotations)
    detections = parse_detections(args.detections, config.color_lexicon) if args.detections else {}
    try:
        scene = annotations.scene(args.video, args.frame)
    except KeyError:
        raise ValidationError(f"no frame {args.frame} in video {args.video}") from None
    ast = parse_expression(args.expr, annotations.category_names, config.color_lexicon)
    result = resolve(ast, scene, detections.get((args.video, args.frame), ()), config.cue)
    print(json.dumps(result.to_dict()))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    annotations = parse_annotations(args.annotations)
    msg = f"{args.annotations}: {len(annotations.videos)} videos, {len(annotations.tracks)} objects"
    if args.detections:
        detections = parse_detections(args.detections, config.color_lexicon)
        msg += f"; {args.detections}: {len(detections)} frame records"
    print(f"ok: {msg}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate referring expressions for every visible object")
    p.add_argument("--annotations", required=True)
    p.add_argument("--detections")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--summary", action="store_true", help="print dataset statistics as JSON")
    p.add_argument("--threads", type=int, help="worker count (default: $SYNTHREF_THREADS, 0 = auto)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("stats", help="aggregate statistics of a generated dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--annotations", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("resolve", help="list the objects an expression denotes in one frame")
    p.add_argument("--annotations", required=True)
    p.add_argument("--detections")
    p.add_argument("--config")
    p.add_argument("--video", type=int, required=True)
    p.add_argument("--frame", type=int, required=True)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=_cmd_resolve)

    p = sub.add_parser("validate", help="check input files against their schemas")
    p.add_argument("--annotations", required=True)
    p.add_argument("--detections")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_validate)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run_cli())
