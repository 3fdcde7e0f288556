"""Command-line front end: ``check``, ``examples`` and ``group``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gallery
from .algebra import DEFAULT_MAX_DIM
from .groupmodel import GroupSpecError, parse_group_spec
from .io import InstanceError, dumps_instance, load_instance
from .report import EXIT_INPUT, render, run_check, run_group


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulhopf",
        description="Exact verification of multiplier Hopf algebra axioms, counit and antipode.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify an instance file and run the derivation suite")
    p.add_argument("file", help="instance JSON (algebra plus coproduct)")
    p.add_argument("--side", choices=("left", "right", "both"), default="both",
                   help="which classification gates the derivation (default: both)")
    p.add_argument("--derive", action="store_true", help="include ε and S in the report")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-dim", type=_positive, default=DEFAULT_MAX_DIM,
                   help=f"dimension guard (default {DEFAULT_MAX_DIM})")
    p.add_argument("--no-timing", action="store_true", help="omit duration fields")

    p = sub.add_parser("examples", help="list or emit gallery instances")
    esub = p.add_subparsers(dest="action", required=True)
    esub.add_parser("list", help="print names and expected verdicts")
    e = esub.add_parser("emit", help="write an instance as JSON")
    e.add_argument("name")
    e.add_argument("-o", "--output", help="file to write (default: stdout)")

    p = sub.add_parser("group", help="K(G) window checks or the group algebra Q[G]")
    p.add_argument("--group", required=True, help="z, z^d, cyclic:n or cayley:<path>")
    p.add_argument("--model", choices=("kg", "qg"), default="kg")
    p.add_argument("--window", type=_positive, default=5, help="window radius for infinite groups (default 5)")
    p.add_argument("--samples", type=_positive, default=500, help="random tensors per round-trip check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--emit", metavar="PATH", help="with --model qg and a finite group, also write the instance JSON")
    p.add_argument("--no-timing", action="store_true", help="omit duration fields")
    return parser


def cmd_check(args) -> int:
    try:
        name, d = load_instance(args.file, max_dim=args.max_dim)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_check(name, d, side=args.side, derive=args.derive)
    sys.stdout.write(render(report, args.format, timing=not args.no_timing))
    return report.exit_code


def cmd_examples(args) -> int:
    if args.action == "list":
        rows = gallery.listing()
        width = max(len(n) for n, _ in rows)
        for name, expected in rows:
            print(f"{name:<{width}}  {expected}")
        return 0
    try:
        inst = gallery.get(args.name)
    except KeyError:
        print(f"error: unknown example {args.name!r}; see 'examples list'", file=sys.stderr)
        return EXIT_INPUT
    text = dumps_instance(inst.name, inst.coproduct)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_group(args) -> int:
    try:
        g = parse_group_spec(args.group)
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_group(g, args.model, args.window, seed=args.seed, samples=args.samples)
    if args.emit:
        if args.model != "qg" or not g.finite:
            print("error: --emit needs --model qg and a finite group", file=sys.stderr)
            return EXIT_INPUT
        from .groupmodel import group_algebra_model

        Path(args.emit).write_text(dumps_instance(f"Q[{g.name}]", group_algebra_model(g)), encoding="utf-8")
    sys.stdout.write(render(report, args.format, timing=not args.no_timing))
    return report.exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"check": cmd_check, "examples": cmd_examples, "group": cmd_group}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
