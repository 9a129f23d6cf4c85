"""Command line entry point: ``iwalab verify``, ``iwalab catalog``, ``iwalab show``."""

from __future__ import annotations

import argparse
import sys

from . import verify as V
from .catalog import CATALOG, catalog_list, catalog_module
from .fileio import InputError, load_module, module_to_dict
from .report import emit_report, to_json


def _levels(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(x < 0 for x in out):
        raise argparse.ArgumentTypeError("levels must be nonnegative")
    return out


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _add_source(parser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--module", metavar="FILE", help="module description file (JSON)")
    src.add_argument("--catalog", metavar="NAME", help="built-in example (see `iwalab catalog`)")
    parser.add_argument("--prime", type=int, default=2,
                        help="prime for catalog entries (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iwalab",
                                     description="Finite-level checks for modules over Iwasawa algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification pipeline")
    _add_source(v)
    v.add_argument("--max-level", type=_levels, metavar="n1[,n2,...]",
                   help="level bound (default 2 for d = 1, 1,1 for d = 2)")
    v.add_argument("--precision", type=_positive, metavar="N",
                   help="starting p-adic precision (raised automatically)")
    v.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--checks", default="all",
                   help="comma list of duality, naturality, colimit, growth, char, all")

    sub.add_parser("catalog", help="list built-in examples")

    s = sub.add_parser("show", help="print a module description as JSON")
    _add_source(s)
    return parser


def _load(args):
    if args.module is not None:
        return load_module(args.module)
    if args.catalog not in CATALOG:
        raise InputError(f"--catalog: unknown entry {args.catalog!r}; known: {', '.join(CATALOG)}")
    from sympy import isprime
    if args.prime < 2 or not isprime(args.prime):
        raise InputError(f"--prime: {args.prime} is not prime")
    return catalog_module(args.catalog, args.prime)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2, which is reserved here
        return V.EXIT_INPUT if exc.code else 0

    if args.command == "catalog":
        width = max(len(n) for n, _ in catalog_list())
        for name, desc in catalog_list():
            print(f"{name:<{width}}  d={CATALOG[name].d}  {desc}")
        return 0

    try:
        M = _load(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return V.EXIT_INPUT

    if args.command == "show":
        sys.stdout.write(to_json(module_to_dict(M)))
        return 0

    try:
        checks = V.parse_checks(args.checks)
        if args.max_level is not None and len(args.max_level) != M.d:
            raise ValueError(f"--max-level: expected {M.d} coordinates, got {len(args.max_level)}")
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return V.EXIT_INPUT
    expected = CATALOG[args.catalog].metadata.get("pseudoNull") if args.catalog else None
    report, code = V.run_verify(M, args.max_level, args.precision, args.seed, checks,
                                expected_pseudo_null=expected)
    sys.stdout.write(emit_report(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
