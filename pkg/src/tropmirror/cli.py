"""Command line entry point: ``tropmirror <command> job.json``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .errors import (
    DegenerateInput,
    MinimizerNotRealized,
    ParseError,
    TropMirrorError,
    ValidationError,
    WrongDimension,
)
from .pipeline import _parse_delete, _rational_field, dumps, parse_input, run

log = logging.getLogger("tropmirror")

EXIT_OK, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3

COMMANDS = {
    # command: (mode, report sections kept)
    "subdivide": ("hypersurface", ("subdivision", "tropical")),
    "mirror": ("hypersurface", ("subdivision", "tropical", "mirror", "atlas")),
    "potential": ("hypersurface", ("mirror", "superpotential")),
    "critlocus": ("critlocus", ("tropical", "critical_locus")),
    "wallcheck": ("wallcheck", ("atlas", "wallcheck")),
    "converse": ("converse", ("converse",)),
    "ci": ("ci", None),
}
ALWAYS = ("mode", "input", "warnings")
INPUT_ERRORS = (ParseError, ValidationError, WrongDimension, DegenerateInput, MinimizerNotRealized)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropmirror", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="job file, or - for stdin")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--svg", help="write an SVG picture of the tropical curve (n = 2)")
        p.add_argument("--cutoff", help="T-adic cutoff as an exact rational, e.g. 3 or 5/2")
        p.add_argument(
            "--delete",
            action="append",
            help="ray direction to delete, e.g. --delete=-1,0 (repeatable), or all / none",
        )
        p.add_argument("--strict", action="store_true", help="turn degeneracy warnings into errors")
        p.add_argument("--seed", type=int, help="seed for the randomized invariant suites")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _delete_value(items: list[str]):
    if len(items) == 1 and items[0] in ("all", "none"):
        return items[0]
    dirs = []
    for item in items:
        try:
            dirs.append([int(x) for x in item.split(",")])
        except ValueError as exc:
            raise ParseError(f"--delete: cannot read direction {item!r}") from exc
    return _parse_delete(dirs)


def _apply_flags(job, args):
    opts = job.options
    changes = {}
    if args.cutoff is not None:
        changes["cutoff"] = _rational_field("--cutoff", args.cutoff)
    if args.delete:
        changes["delete"] = _delete_value(args.delete)
    if args.svg:
        changes["svg"] = True
    if args.out:
        changes["report"] = args.out
    if args.strict:
        changes["strict"] = True
    if args.seed is not None:
        changes["seed"] = args.seed
    return dataclasses.replace(job, options=dataclasses.replace(opts, **changes))


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s" if os.environ.get("NO_COLOR") else "\033[2m%(levelname)s\033[0m %(message)s",
    )
    mode, sections = COMMANDS[args.command]
    try:
        job = _apply_flags(parse_input(_read(args.input), mode=mode), args)
        if args.strict and job.mode != "ci":
            from .tropical import lower_hull_subdivision

            lower_hull_subdivision(job.points, strict=True)
        report, svg = run(job)
    except INPUT_ERRORS as exc:
        print(f"error [{exc.module}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TropMirrorError as exc:
        print(f"error [{exc.module}]: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - any other failure is a bug
        log.debug("internal failure", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    if sections is not None:
        report = {k: v for k, v in report.items() if k in ALWAYS or k in sections}
    for message in report.get("warnings", []):
        log.warning(message)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif args.command != "wallcheck":
        sys.stdout.write(text)
    if args.command == "wallcheck":
        print(report["wallcheck"]["summary"])
    if args.svg:
        if svg is None:
            log.warning("no SVG: pictures are drawn for n = 2 only")
        else:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
