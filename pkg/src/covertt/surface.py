"""Surface syntax: parser and pretty-printer.

Declaration files consist of ``def name : TYPE := TERM`` and
``postulate name : TYPE`` items, with ``--`` line comments and textual
includes ``import "file"``.  Binders are ``(x : T) -> B`` and
``(x : T) * B``; ``->`` and ``*`` are sugar for their non-dependent forms;
application is juxtaposition; lambdas are ``fun x => t``.  Eliminators take
the motive as their first argument.

The pretty-printer emits text that re-parses to a structurally equal term,
with deterministic fresh names ``x0, x1, ...`` indexed by binder depth.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Optional

from . import terms as T
from .terms import Term
from .typecheck import Declaration


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        loc = f"{line}:{col}"
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{loc}: {message}{exp}")


# keyword -> (constructor, arity); arity counts juxtaposed atom arguments
KEYWORD_FORMS = {
    "refl": (T.Refl, 1),
    "fst": (T.Proj1, 1),
    "snd": (T.Proj2, 1),
    "inl": (T.Inl, 1),
    "inr": (T.Inr, 1),
    "sup": (T.Sup, 2),
    "dsup": (T.DSup, 3),
    "ind": (T.Ind, 3),
    "rf": (T.Rf, 2),
    "tr": (T.Tr, 3),
    "absurd": (T.EmptyElim, 2),
    "unitElim": (T.UnitElim, 3),
    "split": (T.SigElim, 3),
    "case": (T.SumElim, 4),
    "J": (T.J, 5),
    "elimW": (T.WElim, 3),
    "elimDW": (T.DWElim, 4),
    "elimWP": (T.WPElim, 4),
    "elimCover": (T.CoverElim, 5),
    "W": (T.W, 2),
    "DW": (T.DW, 4),
    "WP": (T.WP, 3),
    "Cover": (T.Cover, 4),
    "Sum": (T.Sum, 2),
    "Id": (T.Id, 3),
}

ATOM_KEYWORDS = {"U0": T.Univ, "N0": T.Empty, "N1": T.Unit, "star": T.Star}

BINDER_KEYWORDS = {"Pi", "Sig"}

RESERVED = (
    set(KEYWORD_FORMS)
    | set(ATOM_KEYWORDS)
    | BINDER_KEYWORDS
    | {"fun", "def", "postulate", "import"}
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, punct, string, eof
    text: str
    line: int
    col: int


PUNCT = (":=", "=>", "->", "(", ")", ":", "*", ",")


def tokenize(src: str):
    toks = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("--", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and src[j] != '"':
                if src[j] == "\n":
                    raise ParseError("unterminated string", line, col)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line, col)
            toks.append(Token("string", src[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        matched = None
        for p in PUNCT:
            if src.startswith(p, i):
                matched = p
                break
        if matched:
            toks.append(Token("punct", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            word = src[i:j]
            kind = "keyword" if word in RESERVED else "ident"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"stray character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class Parser:
    def __init__(self, src: str, filename: str = "<input>"):
        self.toks = tokenize(src)
        self.pos = 0
        self.filename = filename
        self.scope: list[str] = []

    # -- token plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def error(self, message: str, expected=()):
        t = self.peek()
        raise ParseError(message, t.line, t.col, expected)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            self.error(f"unexpected {t.kind} {t.text!r}", expected=[text or kind])
        return self.next()

    def at_punct(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.text == text

    def at_keyword(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "keyword" and t.text == text

    # -- files

    def parse_file(self) -> tuple[list[Declaration], list[str]]:
        decls: list[Declaration] = []
        imports: list[str] = []
        while self.peek().kind != "eof":
            t = self.peek()
            if self.at_keyword("import"):
                self.next()
                imports.append(self.expect("string").text)
            elif self.at_keyword("def"):
                self.next()
                name = self.expect("ident").text
                self.expect("punct", ":")
                ty = self.parse_term()
                self.expect("punct", ":=")
                body = self.parse_term()
                decls.append(
                    Declaration(name, ty, body, f"{self.filename}:{t.line}")
                )
            elif self.at_keyword("postulate"):
                self.next()
                name = self.expect("ident").text
                self.expect("punct", ":")
                ty = self.parse_term()
                decls.append(Declaration(name, ty, None, f"{self.filename}:{t.line}"))
            else:
                self.error("expected a declaration", expected=["def", "postulate", "import"])
        return decls, imports

    # -- terms

    def parse_term(self) -> Term:
        if self.at_keyword("fun"):
            self.next()
            name = self.expect("ident").text
            self.expect("punct", "=>")
            self.scope.append(name)
            try:
                body = self.parse_term()
            finally:
                self.scope.pop()
            return T.Lam(body)
        return self.parse_arrow()

    def parse_arrow(self) -> Term:
        if self._is_binder()[0]:
            node = self._parse_binder()
            if self.at_punct("->"):
                self.next()
                return T.Pi(node, T.weaken(self.parse_arrow()))
            return node
        left = self.parse_star_level()
        if self.at_punct("->"):
            self.next()
            right = self.parse_arrow()
            return T.Pi(left, T.weaken(right))
        return left

    def _parse_binder(self) -> Term:
        self.next()  # (
        name = self.next().text
        self.expect("punct", ":")
        dom = self.parse_term()
        self.expect("punct", ")")
        op = self.next()  # -> or *
        self.scope.append(name)
        try:
            if op.text == "->":
                return T.Pi(dom, self.parse_arrow())
            return T.Sigma(dom, self.parse_sigma_rhs())
        finally:
            self.scope.pop()

    def parse_sigma_rhs(self) -> Term:
        # right-hand side of '*': binds tighter than '->'
        if self._is_binder()[0]:
            return self._parse_binder()
        return self.parse_star_level()

    def _is_binder(self):
        # lookahead: "(" ident ":" ... ")" followed by -> or *
        if not (self.at_punct("(") and self.peek(1).kind == "ident"):
            return False, None
        if not (self.peek(2).kind == "punct" and self.peek(2).text == ":"):
            return False, None
        depth = 0
        k = self.pos
        while True:
            t = self.toks[k]
            if t.kind == "eof":
                return False, None
            if t.kind == "punct" and t.text == "(":
                depth += 1
            elif t.kind == "punct" and t.text == ")":
                depth -= 1
                if depth == 0:
                    nxt = self.toks[k + 1]
                    if nxt.kind == "punct" and nxt.text in ("->", "*"):
                        return True, nxt.text
                    return False, None
            k += 1

    def parse_star_level(self) -> Term:
        left = self.parse_app()
        if self.at_punct("*"):
            self.next()
            right = self.parse_sigma_rhs()
            return T.Sigma(left, T.weaken(right))
        return left

    def parse_app(self) -> Term:
        head = self.parse_atom()
        while self._atom_starts():
            arg = self.parse_atom()
            head = T.App(head, arg)
        return head

    def _atom_starts(self) -> bool:
        t = self.peek()
        if t.kind == "ident":
            return True
        if t.kind == "keyword" and (
            t.text in KEYWORD_FORMS or t.text in ATOM_KEYWORDS or t.text in BINDER_KEYWORDS
        ):
            return True
        if t.kind == "punct" and t.text == "(":
            return True
        return False

    def parse_atom(self) -> Term:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            name = t.text
            for i, bound in enumerate(reversed(self.scope)):
                if bound == name:
                    return T.Var(i)
            return T.Const(name)
        if t.kind == "keyword":
            if t.text in ATOM_KEYWORDS:
                self.next()
                return ATOM_KEYWORDS[t.text]()
            if t.text in KEYWORD_FORMS:
                self.next()
                ctor, arity = KEYWORD_FORMS[t.text]
                args = []
                for k in range(arity):
                    if not self._atom_starts():
                        self.error(
                            f"{t.text} expects {arity} arguments, got {k}",
                            expected=["term"],
                        )
                    args.append(self.parse_atom())
                return ctor(*args)
            if t.text in BINDER_KEYWORDS:
                self.next()
                dom = self.parse_atom()
                fam = self.parse_atom()
                if isinstance(fam, T.Lam):
                    body = fam.body
                else:
                    body = T.App(T.weaken(fam), T.Var(0))
                return T.Pi(dom, body) if t.text == "Pi" else T.Sigma(dom, body)
            if t.text == "fun":
                return self.parse_term()
            self.error(f"keyword {t.text!r} cannot start an atom")
        if self.at_punct("("):
            self.next()
            inner = self.parse_term()
            if self.at_punct(","):
                self.next()
                second = self.parse_term()
                self.expect("punct", ")")
                return T.Pair(inner, second)
            if self.at_punct(":"):
                self.next()
                ty = self.parse_term()
                self.expect("punct", ")")
                return T.Ann(inner, ty)
            self.expect("punct", ")")
            return inner
        self.error(f"unexpected {t.kind} {t.text!r}", expected=["term"])


def parse_term(src: str, scope: Optional[list[str]] = None) -> Term:
    p = Parser(src)
    if scope:
        p.scope = list(scope)
    t = p.parse_term()
    if p.peek().kind != "eof":
        p.error("trailing input after term")
    return t


def parse_file(src: str, filename: str = "<input>") -> tuple[list[Declaration], list[str]]:
    return Parser(src, filename).parse_file()


def load_file(path: str, _seen: Optional[dict] = None) -> list[Declaration]:
    """Parse ``path`` and its imports (relative, cycle-rejected, deduplicated)."""
    if _seen is None:
        _seen = {}
    ap = os.path.abspath(path)
    state = _seen.get(ap)
    if state == "loading":
        raise ParseError(f"import cycle through {path}", 0, 0)
    if state == "done":
        return []
    _seen[ap] = "loading"
    with open(ap, encoding="utf-8") as fh:
        src = fh.read()
    decls, imports = parse_file(src, os.path.basename(ap))
    out: list[Declaration] = []
    for imp in imports:
        out.extend(load_file(os.path.join(os.path.dirname(ap), imp), _seen))
    out.extend(decls)
    _seen[ap] = "done"
    return out


# --- pretty-printing ----------------------------------------------------------

# precedence levels: 0 = term (fun/arrows), 1 = star, 2 = application, 3 = atom


def pretty(t: Term) -> str:
    return _pp(t, 0, 0)


def _name(depth: int) -> str:
    return f"x{depth}"


def _pp(t: Term, depth: int, prec: int) -> str:
    def wrap(s: str, level: int) -> str:
        return f"({s})" if prec > level else s

    match t:
        case T.Var(i):
            return _name(depth - 1 - i) if i < depth else f"?{i - depth}"
        case T.Const(name):
            return name
        case T.Univ():
            return "U0"
        case T.TypeSort():
            return "Type"
        case T.Empty():
            return "N0"
        case T.Unit():
            return "N1"
        case T.Star():
            return "star"
        case T.Lam(body):
            return wrap(f"fun {_name(depth)} => {_pp(body, depth + 1, 0)}", 0)
        case T.Pi(dom, cod):
            if not T.free_in(cod, 0):
                lhs = _pp(dom, depth, 1)
                rhs = _pp(T.strengthen(cod), depth, 0)
                return wrap(f"{lhs} -> {rhs}", 0)
            return wrap(
                f"({_name(depth)} : {_pp(dom, depth, 0)}) -> {_pp(cod, depth + 1, 0)}",
                0,
            )
        case T.Sigma(fst, snd):
            if not T.free_in(snd, 0):
                lhs = _pp(fst, depth, 2)
                rhs = _pp(T.strengthen(snd), depth, 1)
                return wrap(f"{lhs} * {rhs}", 1)
            return wrap(
                f"({_name(depth)} : {_pp(fst, depth, 0)}) * {_pp(snd, depth + 1, 1)}",
                1,
            )
        case T.App(f, a):
            return wrap(f"{_pp(f, depth, 2)} {_pp(a, depth, 3)}", 2)
        case T.Pair(a, b):
            return f"( {_pp(a, depth, 0)} , {_pp(b, depth, 0)} )"
        case T.Ann(tm, ty):
            return f"( {_pp(tm, depth, 0)} : {_pp(ty, depth, 0)} )"
    # fixed-arity keyword forms
    for kw, (ctor, _arity) in KEYWORD_FORMS.items():
        if type(t) is ctor:
            args = [getattr(t, f.name) for f in dataclasses.fields(t)]
            parts = [kw] + [_pp(a, depth, 3) for a in args]
            return "(" + " ".join(parts) + ")" if prec > 2 else " ".join(parts)
    raise ValueError(f"pretty: unhandled term {type(t).__name__}")


def pretty_declaration(d: Declaration) -> str:
    if d.body is None:
        return f"postulate {d.name} : {pretty(d.type)}"
    return f"def {d.name} : {pretty(d.type)} := {pretty(d.body)}"
