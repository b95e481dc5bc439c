"""Surface syntax: parsing, pretty-printing, round trips, includes."""

import os

import pytest

from covertt import surface
from covertt.surface import ParseError, parse_file, parse_term, pretty
from covertt import terms as T

from helpers import CORPUS


def test_identity_roundtrip():
    t = parse_term("fun x => x")
    assert parse_term(pretty(t)) == t


def test_pretty_star():
    assert pretty(T.Star()) == "star"


def test_arrow_sugar_and_binders():
    t = parse_term("(A : U0) -> A -> A")
    assert isinstance(t, T.Pi)
    assert t == T.Pi(T.Univ(), T.Pi(T.Var(0), T.Var(1)))
    s = parse_term("(A : U0) * A")
    assert s == T.Sigma(T.Univ(), T.Var(0))
    n = parse_term("N1 * N0 -> N1")
    assert n == T.Pi(T.Sigma(T.Unit(), T.Empty()), T.Unit())


def test_application_left_associative():
    t = parse_term("f a b", scope=["f", "a", "b"])
    assert t == T.App(T.App(T.Var(2), T.Var(1)), T.Var(0))


def test_arrows_right_associative():
    t = parse_term("N1 -> N1 -> N1")
    assert t == T.Pi(T.Unit(), T.Pi(T.Unit(), T.Unit()))


def test_eliminator_arities_enforced():
    with pytest.raises(ParseError):
        parse_term("sup a", scope=["a"])
    with pytest.raises(ParseError):
        parse_term("J a b", scope=["a", "b"])


def test_keywords_are_not_identifiers():
    for kw in ("sup", "fun", "W", "case", "split", "U0"):
        with pytest.raises(ParseError):
            parse_file(f"def {kw} : N1 := star")


def test_pair_and_annotation():
    t = parse_term("( star , star )")
    assert t == T.Pair(T.Star(), T.Star())
    a = parse_term("( star : N1 )")
    assert a == T.Ann(T.Star(), T.Unit())


def test_family_former_keywords():
    t = parse_term("W N1 (fun x => N0)")
    assert t == T.W(T.Unit(), T.Lam(T.Empty()))
    t = parse_term("Cover N1 (fun a => N1) (fun a => fun i => fun b => N0) (fun a => N1) star")
    assert isinstance(t, T.App) and isinstance(t.fn, T.Cover)


def test_pi_sig_keyword_forms():
    assert parse_term("Pi N1 (fun x => N1)") == T.Pi(T.Unit(), T.Unit())
    assert parse_term("Sig N1 (fun x => N1)") == T.Sigma(T.Unit(), T.Unit())


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as e:
        parse_file("def x : N1 :=")
    assert e.value.line == 1 and e.value.col > 0


def test_comments_ignored():
    decls, _ = parse_file("-- a comment\ndef x : N1 := star -- trailing\n")
    assert decls[0].name == "x"


def test_corpus_roundtrips():
    for fn in sorted(os.listdir(CORPUS)):
        if not fn.endswith(".mltt"):
            continue
        with open(os.path.join(CORPUS, fn), encoding="utf-8") as fh:
            src = fh.read()
        decls, _ = parse_file(src, fn)
        for d in decls:
            printed = surface.pretty_declaration(d)
            reparsed = parse_file(printed, fn)[0][0]
            assert reparsed.type == d.type, (fn, d.name)
            assert reparsed.body == d.body, (fn, d.name)


def test_pretty_is_deterministic():
    for src in ("fun x => fun y => x", "(x : N1) -> N1 * N1", "sup star (fun b => b)"):
        t = parse_term(src)
        assert pretty(t) == pretty(parse_term(pretty(t)))


def test_import_resolution_and_cycles(tmp_path):
    a = tmp_path / "a.mltt"
    b = tmp_path / "b.mltt"
    a.write_text('import "b.mltt"\ndef two : N1 * N1 := ( one , one )\n')
    b.write_text("def one : N1 := star\n")
    decls = surface.load_file(str(a))
    assert [d.name for d in decls] == ["one", "two"]

    a.write_text('import "b.mltt"\ndef x : N1 := star\n')
    b.write_text('import "a.mltt"\ndef y : N1 := star\n')
    with pytest.raises(ParseError) as e:
        surface.load_file(str(a))
    assert "cycle" in str(e.value)


def test_import_deduplication(tmp_path):
    base = tmp_path / "base.mltt"
    mid = tmp_path / "mid.mltt"
    top = tmp_path / "top.mltt"
    base.write_text("def one : N1 := star\n")
    mid.write_text('import "base.mltt"\ndef two : N1 := one\n')
    top.write_text('import "base.mltt"\nimport "mid.mltt"\ndef three : N1 := two\n')
    decls = surface.load_file(str(top))
    assert [d.name for d in decls] == ["one", "two", "three"]
