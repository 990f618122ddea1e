"""Command-line front end.

  contactgeo classify <input> [--points N --vectors V --tol T --seed S --format json|md]
  contactgeo verify   <input> [--identities all|id,...] [same flags]

Inputs are either ``catalog:<name>`` or a path to a JSON document (see io).
Reports go to stdout, diagnostics to stderr.  Exit codes: 0 = ran and the
structures are valid (class verdicts are data, never errors), 1 = input or
schema error, 2 = the structure violates its own invariants.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as report_mod
from .catalog import catalog
from .classify import applicable_classes, classify
from .errors import (
    ContactGeoError,
    InputFormatError,
    StructureInvariantError,
    UnknownCatalogError,
    UnknownIdentityError,
)
from .identities import verify_identities
from .io import load_document
from .structures import AcmStructure, AhStructure
from .submersion import SubmersionSpec
from .util import Sampling


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactgeo",
        description="Numerical classification and identity verification for "
        "almost contact metric structures and contact-complex Riemannian submersions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("classify", "classify a structure against the registered classes"),
        ("verify", "verify the registered submersion identities"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "input",
            help="'catalog:<name>' or a path to a JSON structure/submersion document",
        )
        p.add_argument("--points", type=int, default=32, help="sample points (default 32)")
        p.add_argument("--vectors", type=int, default=8, help="vector tuples per point (default 8)")
        p.add_argument("--tol", type=float, default=1e-7, help="residual tolerance (default 1e-7)")
        p.add_argument("--seed", type=int, default=42, help="sampling seed (default 42)")
        p.add_argument("--format", choices=("json", "md"), default="json")
        if name == "verify":
            p.add_argument(
                "--identities",
                default="all",
                help="comma-separated identity ids; 'P2.1.*' globs a family; default all",
            )
    return parser


def _resolve_input(label: str):
    if label.startswith("catalog:"):
        name = label[len("catalog:") :]
        entry = catalog(name)
        obj = entry.build()
        digest = report_mod.input_hash({"catalog": name})
        return obj, digest
    path = Path(label)
    if not path.exists():
        raise InputFormatError(f"no such file: {label}")
    data = path.read_bytes()
    return load_document(data.decode("utf-8")), report_mod.input_hash(data)


def _validate(obj, sampling: Sampling) -> None:
    n_val = min(sampling.points, 16)
    problems = obj.validate(n_points=n_val, seed=sampling.seed)
    if problems:
        raise StructureInvariantError("structure invariants violated", violations=problems)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    sampling = Sampling(points=args.points, vectors=args.vectors, seed=args.seed, tol=args.tol)

    try:
        obj, digest = _resolve_input(args.input)
    except (InputFormatError, UnknownCatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "classify":
            target = obj.total if isinstance(obj, SubmersionSpec) else obj
            if not isinstance(target, (AcmStructure, AhStructure)):
                print("error: classify needs an ACM or AH structure", file=sys.stderr)
                return 1
            _validate(target, sampling)
            results = [classify(target, cid, sampling) for cid in applicable_classes(target)]
        else:
            if not isinstance(obj, SubmersionSpec):
                print("error: verify needs a submersion document or catalog entry", file=sys.stderr)
                return 1
            _validate(obj, sampling)
            results = verify_identities(obj, args.identities, sampling)
    except UnknownIdentityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StructureInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  - {v}", file=sys.stderr)
        return 2
    except ContactGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    doc = report_mod.build_document(args.command, args.input, digest, sampling, results)
    if args.format == "json":
        sys.stdout.write(report_mod.to_json(doc))
    else:
        sys.stdout.write(report_mod.to_markdown(doc))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
