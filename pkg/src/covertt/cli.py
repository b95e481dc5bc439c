"""Batch command-line interface.

Commands: ``check`` a declaration file, ``norm`` an expression in a file's
final context, ``conv`` two expressions at a type, ``corpus`` for the
shipped proof corpus, and ``cover`` for finite axiom-set files.  The four
equality flags are global per invocation; reports are stable line-oriented
text and the exit status is zero exactly when no failure was reported.
"""

from __future__ import annotations

import argparse
import sys

from . import cover as cover_mod
from . import encodings, surface, typecheck
from .terms import Flags
from .typecheck import Checker, Context, TypeCheckError


def _add_flag_args(p: argparse.ArgumentParser):
    p.add_argument("--eta-pi", action="store_true", help="uniqueness for functions")
    p.add_argument("--eta-sigma", action="store_true", help="uniqueness for pairs")
    p.add_argument("--eta-unit", action="store_true", help="uniqueness for the unit type")
    p.add_argument("--funext", action="store_true", help="function extensionality constant")


def _flags(ns) -> Flags:
    return Flags(
        eta_pi=ns.eta_pi, eta_sigma=ns.eta_sigma, eta_unit=ns.eta_unit, funext=ns.funext
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covertt")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="type-check a declaration file")
    p.add_argument("file")
    _add_flag_args(p)

    p = sub.add_parser("norm", help="print the normal form of an expression")
    p.add_argument("file", nargs="?", help="declaration file providing the context")
    p.add_argument("--expr", required=True)
    _add_flag_args(p)

    p = sub.add_parser("conv", help="check two expressions convertible at a type")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--type", required=True, dest="at_type")
    p.add_argument("--file", help="declaration file providing definitions")
    p.add_argument(
        "--context",
        default="",
        help="comma-separated typed assumptions, e.g. 'A : U0, f : A -> A'",
    )
    _add_flag_args(p)

    p = sub.add_parser("corpus", help="check the shipped proof corpus")
    p.add_argument("--corpus-dir", default=None)
    _add_flag_args(p)

    p = sub.add_parser("cover", help="run queries of a finite axiom-set file")
    p.add_argument("file")
    p.add_argument("--derivations", action="store_true")

    return ap


def _load_checker(path, flags) -> Checker:
    if path is None:
        return Checker(flags)
    decls = surface.load_file(path)
    return typecheck.check_declarations(decls, flags)


def _parse_context(checker: Checker, spec: str):
    """Extend an empty context by 'name : TYPE' items, left to right."""
    ctx = Context()
    scope: list[str] = []
    if not spec.strip():
        return ctx, scope
    for item in spec.split(","):
        name, _, ty_src = item.partition(":")
        name = name.strip()
        if not name or not ty_src.strip():
            raise SystemExit(f"error: malformed context item {item.strip()!r}")
        ty = surface.parse_term(ty_src, scope=scope)
        checker.ensure_type(ctx, ty)
        ctx = ctx.extend(name, checker.eval_in(ctx, ty))
        scope.append(name)
    return ctx, scope


def cmd_check(ns) -> int:
    flags = _flags(ns)
    try:
        decls = surface.load_file(ns.file)
    except (surface.ParseError, OSError) as e:
        print(f"error: {e}")
        return 1
    checker = Checker(flags)
    for d in decls:
        try:
            typecheck.check_declarations([d], flags, checker.globals)
            print(f"ok {d.name}")
        except TypeCheckError as e:
            print(f"error {d.name}")
            print(str(e))
            return 1
    return 0


def cmd_norm(ns) -> int:
    flags = _flags(ns)
    try:
        checker = _load_checker(ns.file, flags)
        term = surface.parse_term(ns.expr)
        print(surface.pretty(typecheck.normalize(checker, term)))
        return 0
    except (surface.ParseError, TypeCheckError, OSError) as e:
        print(f"error: {e}")
        return 1


def cmd_conv(ns) -> int:
    flags = _flags(ns)
    try:
        checker = _load_checker(ns.file, flags)
        ctx, scope = _parse_context(checker, ns.context)
        ty = surface.parse_term(ns.at_type, scope=scope)
        lhs = surface.parse_term(ns.lhs, scope=scope)
        rhs = surface.parse_term(ns.rhs, scope=scope)
        if typecheck.convertible(checker, ty, lhs, rhs, ctx):
            print("convertible")
            return 0
        print("not convertible")
        return 1
    except (surface.ParseError, TypeCheckError, OSError) as e:
        print(f"error: {e}")
        return 1


def cmd_corpus(ns) -> int:
    flags = _flags(ns)
    results = encodings.check_corpus(flags, ns.corpus_dir)
    status = 0
    for r in results:
        if r.status == "pass":
            print(f"PASS {r.tag} {r.file}")
        elif r.status == "skip":
            print(f"SKIP {r.tag} {r.file} ({r.detail})")
        else:
            print(f"FAIL {r.tag} {r.file}: {r.detail}")
            status = 1
    return status


def cmd_cover(ns) -> int:
    try:
        with open(ns.file, encoding="utf-8") as fh:
            cf = cover_mod.load_axiom_set(fh.read())
    except (cover_mod.FormatError, OSError) as e:
        print(f"error: {e}")
        return 1
    for line in cover_mod.run_queries(cf, with_derivations=ns.derivations):
        print(line)
    return 0


def main(argv=None) -> int:
    sys.setrecursionlimit(100_000)
    ns = build_parser().parse_args(argv)
    handler = {
        "check": cmd_check,
        "norm": cmd_norm,
        "conv": cmd_conv,
        "corpus": cmd_corpus,
        "cover": cmd_cover,
    }[ns.command]
    return handler(ns)


if __name__ == "__main__":
    raise SystemExit(main())
