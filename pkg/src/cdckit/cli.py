"""Command-line surface: construct recipes, verify code files, print
bounds and closed-form sizes, and import/export code files.

Exit codes: 0 ok, 1 verification violation, 2 usage, 3 I/O or parse
failure, 4 precondition not met.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import bounds, codefile, constructions, verify
from .cdc import CdcError, MATERIALIZE_CAP
from .constructions import ConstructionError, MissingImportError
from .linalg import gaussian_binomial
from .rankmetric import mrd_size, rank_distribution

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PRECONDITION = 4


class _CliError(Exception):
    def __init__(self, exit_code, message):
        super().__init__(message)
        self.exit_code = exit_code


def _fail(exit_code, message):
    raise _CliError(exit_code, message)


# ----------------------------------------------------------------------
# construct
# ----------------------------------------------------------------------

_IMPORT_SLOTS = ("parallelism", "base", "base_subcode", "seq_base")


def _load_imports(specs):
    kwargs = {}
    for spec in specs or []:
        slot, _, path = spec.partition("=")
        if not path or slot not in _IMPORT_SLOTS:
            _fail(EXIT_USAGE, f"bad --import {spec!r}; slots: {_IMPORT_SLOTS}")
        try:
            kwargs[slot] = codefile.import_code(path)
        except OSError as exc:
            _fail(EXIT_IO, f"cannot read import {path}: {exc}")
        except codefile.CodeFileError as exc:
            _fail(EXIT_IO, f"bad import file {path}: {exc}")
    return kwargs


def _write_out(code, out, note):
    if out == "-":
        n = codefile.write_code(code, sys.stdout, prov=note)
    else:
        n = codefile.export(code, out, prov=note)
    return n


def cmd_construct(args):
    recipe = constructions.RECIPES.get(args.recipe)
    if recipe is None:
        _fail(EXIT_USAGE, f"unknown recipe {args.recipe!r}; "
                          f"known: {sorted(constructions.RECIPES)}")
    kwargs = _load_imports(getattr(args, "import_specs", None))
    if args.recipe in ("4k_2k_2k", "6k_2k_2k", "3k_4_k"):
        if args.k is None:
            _fail(EXIT_USAGE, f"recipe {args.recipe} requires --k")
        kwargs["k"] = args.k
    try:
        code, expected = recipe(args.q, **kwargs)
    except MissingImportError as exc:
        _fail(EXIT_PRECONDITION, f"missing import: {exc}")
    except (ConstructionError, CdcError, ValueError) as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    summary = sys.stderr if args.out == "-" else sys.stdout
    if code is None:
        print(f"recipe {args.recipe} q={args.q}: closed-form size only, "
              f"expected_size={expected}", file=summary)
        if args.out:
            _fail(EXIT_PRECONDITION,
                  f"recipe {args.recipe} does not realize codewords; no file written")
        return EXIT_OK
    if args.materialize:
        code.words(cap=max(MATERIALIZE_CAP, code.size))
    generated = code.size
    if args.out:
        try:
            generated = _write_out(code, args.out, f"recipe_{args.recipe}")
        except OSError as exc:
            _fail(EXIT_IO, str(exc))
    status = "ok" if generated == expected else "MISMATCH"
    print(f"recipe {args.recipe} q={args.q}: expected_size={expected} "
          f"generated={generated} {status}", file=summary)
    return EXIT_OK if status == "ok" else EXIT_VIOLATION


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------

def _import_or_fail(path):
    try:
        return codefile.import_code(path)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except codefile.CodeFileError as exc:
        _fail(EXIT_IO, f"parse failure: {exc}")


def cmd_verify(args):
    code = _import_or_fail(args.file)
    try:
        if args.mode == "full":
            report = verify.full_pairwise_check(code, cap=args.cap, jobs=args.jobs)
        else:
            report = verify.sampled_check(code, args.pairs, seed=args.seed)
    except verify.CapExceeded as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_VIOLATION


# ----------------------------------------------------------------------
# bound / formula
# ----------------------------------------------------------------------

def cmd_bound(args):
    try:
        rows = bounds.bound_table(args.q, args.n, args.d, args.k)
    except bounds.BoundError as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(["name", "kind", "value", "derivation"])
        for name, b in rows:
            writer.writerow([name, b.kind, b.value, " -> ".join(b.derivation)])
    else:
        print(f"bounds for q={args.q} n={args.n} d={args.d} k={args.k}")
        for name, b in rows:
            print(f"  {name:<13} {b.kind:<6} {b.value}")
            for step in b.derivation:
                print(f"      {step}")
    return EXIT_OK


def cmd_formula(args):
    fn = constructions.FORMULAS.get(args.name)
    if fn is None:
        _fail(EXIT_USAGE, f"unknown formula {args.name!r}; "
                          f"known: {sorted(constructions.FORMULAS)}")
    try:
        value = fn(args.q, k=args.k)
    except TypeError:
        _fail(EXIT_USAGE, f"formula {args.name} requires --k")
    except ValueError as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    print(value)
    return EXIT_OK


# ----------------------------------------------------------------------
# import / export / oracle
# ----------------------------------------------------------------------

def cmd_import(args):
    if args.subcode:
        try:
            code, sub = codefile.import_with_subcode(args.file, args.subcode)
        except codefile.SubcodeError as exc:
            _fail(EXIT_VIOLATION, str(exc))
        except OSError as exc:
            _fail(EXIT_IO, str(exc))
        except codefile.CodeFileError as exc:
            _fail(EXIT_IO, f"parse failure: {exc}")
        print(f"{code!r} with verified subcode of size {sub.size}")
    else:
        code = _import_or_fail(args.file)
        print(repr(code))
    return EXIT_OK


def cmd_export(args):
    code = _import_or_fail(args.file)
    try:
        n = _write_out(code, args.out, code.provenance.get("kind", "unknown"))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    summary = sys.stderr if args.out == "-" else sys.stdout
    print(f"wrote {n} codewords", file=summary)
    return EXIT_OK


def cmd_oracle(args):
    if args.kind == "subspace-count":
        print(gaussian_binomial(args.n, args.k, args.q))
    elif args.kind == "enumerate":
        try:
            count = sum(1 for _ in verify.enumerate_subspaces(args.q, args.n, args.k))
        except verify.CapExceeded as exc:
            _fail(EXIT_PRECONDITION, str(exc))
        print(count)
    elif args.kind == "rank-distribution":
        if None in (args.m, args.dr, args.r):
            _fail(EXIT_USAGE, "rank-distribution needs --m --dr --r")
        print(rank_distribution(args.q, args.m, args.n, args.dr, args.r))
    elif args.kind == "mrd-size":
        if None in (args.m, args.dr):
            _fail(EXIT_USAGE, "mrd-size needs --m --dr")
        print(mrd_size(args.q, args.m, args.n, args.dr))
    elif args.kind == "coverage":
        if not args.file:
            _fail(EXIT_USAGE, "coverage needs --file")
        code = _import_or_fail(args.file)
        report = verify.coverage_check(code)
        print(report)
        return EXIT_OK if report["ok"] else EXIT_VIOLATION
    return EXIT_OK


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="cdckit",
                                description="constant-dimension subspace code toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a named recipe")
    c.add_argument("--recipe", required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--k", type=int)
    c.add_argument("--import", dest="import_specs", action="append",
                   metavar="SLOT=PATH")
    c.add_argument("--out")
    c.add_argument("--materialize", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_construct)

    v = sub.add_parser("verify", help="check a code file's minimum distance")
    v.add_argument("--file", required=True)
    v.add_argument("--mode", choices=("full", "sample"), default="full")
    v.add_argument("--pairs", type=int, default=10 ** 5)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cap", type=int, default=verify.FULL_CHECK_CAP)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bound", help="print all applicable bounds")
    for flag in ("--q", "--n", "--d", "--k"):
        b.add_argument(flag, type=int, required=True)
    b.add_argument("--csv", action="store_true")
    b.set_defaults(fn=cmd_bound)

    f = sub.add_parser("formula", help="evaluate a closed-form size")
    f.add_argument("--name", required=True)
    f.add_argument("--q", type=int, required=True)
    f.add_argument("--k", type=int)
    f.set_defaults(fn=cmd_formula)

    i = sub.add_parser("import", help="validate a code file")
    i.add_argument("--file", required=True)
    i.add_argument("--subcode")
    i.set_defaults(fn=cmd_import)

    e = sub.add_parser("export", help="rewrite a code file canonically")
    e.add_argument("--file", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(fn=cmd_export)

    o = sub.add_parser("oracle", help="brute-force counting oracles")
    o.add_argument("--kind", required=True,
                   choices=("subspace-count", "enumerate", "rank-distribution",
                            "mrd-size", "coverage"))
    o.add_argument("--q", type=int, default=2)
    o.add_argument("--n", type=int, default=0)
    o.add_argument("--k", type=int, default=0)
    o.add_argument("--m", type=int)
    o.add_argument("--dr", type=int)
    o.add_argument("--r", type=int)
    o.add_argument("--file")
    o.set_defaults(fn=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"cdckit: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
