"""Shared helpers for the test suite."""

from __future__ import annotations

import itertools
import os

from covertt import surface, typecheck
from covertt.terms import Flags
from covertt.typecheck import Checker, Context

CORPUS = os.path.join(os.path.dirname(__file__), "..", "src", "covertt", "corpus")


ALL_FLAG_SETS = [
    Flags(eta_pi=a, eta_sigma=b, eta_unit=c, funext=d)
    for a, b, c, d in itertools.product([False, True], repeat=4)
]


def checker_for(src: str, flags: Flags = Flags()) -> Checker:
    decls, _ = surface.parse_file(src)
    return typecheck.check_declarations(decls, flags)


def context_of(checker: Checker, items: list[tuple[str, str]]):
    """Build a typed context from (name, type-source) pairs."""
    ctx = Context()
    scope: list[str] = []
    for name, ty_src in items:
        ty = surface.parse_term(ty_src, scope=scope)
        checker.ensure_type(ctx, ty)
        ctx = ctx.extend(name, checker.eval_in(ctx, ty))
        scope.append(name)
    return ctx, scope


def conv(checker: Checker, ctx, scope, ty_src: str, lhs_src: str, rhs_src: str) -> bool:
    ty = surface.parse_term(ty_src, scope=scope)
    lhs = surface.parse_term(lhs_src, scope=scope)
    rhs = surface.parse_term(rhs_src, scope=scope)
    return typecheck.convertible(checker, ty, lhs, rhs, ctx)


def check_in(checker: Checker, ctx, scope, term_src: str, ty_src: str):
    ty = surface.parse_term(ty_src, scope=scope)
    checker.ensure_type(ctx, ty)
    tyv = checker.eval_in(ctx, ty)
    term = surface.parse_term(term_src, scope=scope)
    checker.check(ctx, term, tyv)


def load_corpus_file(name: str):
    return surface.load_file(os.path.join(CORPUS, name))
