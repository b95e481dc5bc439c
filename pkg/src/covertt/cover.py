"""Finite-instance engine for inductively generated basic covers.

An axiom set is a finite carrier with, per atom, an ordered family of
labelled axioms, each covering a subset of the carrier.  The least cover of
a subset V is computed by Kleene iteration of the monotone operator
``F(X) = V  union  { a | some axiom of a has all its atoms in X }``; a
brute-force oracle intersects all rule-closed supersets of V instead.
Derivations replay the iteration rounds, and can be turned into kernel
proof terms over an encoding of the carrier as a right-nested sum of unit
types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import terms as T
from .terms import Term


class FormatError(Exception):
    def __init__(self, message: str, line: int):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class Subset:
    """Bit-vector over the carrier's atom order."""

    mask: int
    size: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.size:
            raise ValueError("subset mask out of range")

    @classmethod
    def empty(cls, size: int) -> "Subset":
        return cls(0, size)

    @classmethod
    def full(cls, size: int) -> "Subset":
        return cls((1 << size) - 1, size)

    @classmethod
    def of(cls, indices, size: int) -> "Subset":
        m = 0
        for i in indices:
            m |= 1 << i
        return cls(m, size)

    def contains(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def union(self, other: "Subset") -> "Subset":
        return Subset(self.mask | other.mask, self.size)

    def issubset(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def indices(self):
        return [i for i in range(self.size) if self.contains(i)]

    def __iter__(self):
        return iter(self.indices())


@dataclass(frozen=True)
class FiniteAxiomSet:
    carrier: tuple[str, ...]
    labels: tuple[tuple[str, ...], ...]  # per atom, ordered axiom labels
    covers: tuple[tuple[Subset, ...], ...]  # per atom, per label, C(a, i)

    def __post_init__(self):
        n = len(self.carrier)
        if len(self.labels) != n or len(self.covers) != n:
            raise ValueError("families must align with the carrier")
        for per_atom in self.covers:
            for s in per_atom:
                if s.size != n:
                    raise ValueError("axiom subset over the wrong carrier")

    def atom_index(self, atom: str) -> int:
        return self.carrier.index(atom)

    @property
    def size(self) -> int:
        return len(self.carrier)


@dataclass(frozen=True)
class RfNode:
    atom: int


@dataclass(frozen=True)
class TrNode:
    atom: int
    label: int
    children: tuple  # one derivation per element of C(atom, label), in order


Derivation = object  # RfNode | TrNode


def _step(ax: FiniteAxiomSet, v_mask: int, x_mask: int) -> int:
    out = x_mask | v_mask
    for a in range(ax.size):
        if out >> a & 1:
            continue
        for cov in ax.covers[a]:
            if cov.mask & ~x_mask == 0:
                out |= 1 << a
                break
    return out


def least_cover(ax: FiniteAxiomSet, v: Subset) -> Subset:
    """Least fixed point by monotone iteration from the empty set.

    Stabilizes within |carrier| rounds.
    """
    x = 0
    while True:
        nxt = _step(ax, v.mask, x)
        if nxt == x:
            return Subset(x, ax.size)
        x = nxt


def brute_force_min_cover(ax: FiniteAxiomSet, v: Subset) -> Subset:
    """Intersection of all rule-closed supersets of V.  Oracle for
    ``least_cover``; exponential, bounded to small carriers."""
    n = ax.size
    if n > 12:
        raise ValueError("brute-force oracle bounded to carriers of size <= 12")
    acc = (1 << n) - 1
    for x in range(1 << n):
        if v.mask & ~x:
            continue
        closed = True
        for a in range(n):
            if x >> a & 1:
                continue
            for cov in ax.covers[a]:
                if cov.mask & ~x == 0:
                    closed = False
                    break
            if not closed:
                break
        if closed:
            acc &= x
    return Subset(acc, n)


def derivation(ax: FiniteAxiomSet, v: Subset, atom: int) -> Optional[Derivation]:
    """Some derivation iff the atom is in the least cover; replays rounds."""
    rounds: list[int] = [v.mask]
    x = v.mask
    while True:
        nxt = _step(ax, v.mask, x)
        if nxt == x:
            break
        rounds.append(nxt)
        x = nxt
    if not x >> atom & 1:
        return None

    def build(a: int) -> Derivation:
        if v.mask >> a & 1:
            return RfNode(a)
        entered = next(k for k in range(len(rounds)) if rounds[k] >> a & 1)
        prev = rounds[entered - 1]
        for li, cov in enumerate(ax.covers[a]):
            if cov.mask & ~prev == 0:
                return TrNode(a, li, tuple(build(b) for b in cov.indices()))
        raise AssertionError("round replay lost an axiom")

    return build(atom)


# --- kernel encoding of finite instances ----------------------------------------


def fin_type(k: int) -> Term:
    """Right-nested sum of unit types with k alternatives (empty when k = 0)."""
    if k == 0:
        return T.Empty()
    if k == 1:
        return T.Unit()
    return T.Sum(T.Unit(), fin_type(k - 1))


def fin_elem(i: int, k: int) -> Term:
    if not 0 <= i < k:
        raise ValueError("element out of range")
    if k == 1:
        return T.Star()
    if i == 0:
        return T.Inl(T.Star())
    return T.Inr(fin_elem(i - 1, k - 1))


def _case_tree(k: int, leaf, scrut: Term, motive_body: Term) -> Term:
    """Dependent case split over ``fin_type(k)``.

    ``leaf(i)`` must be a closed term of type ``motive_body[emb(i, k)]``;
    ``motive_body`` has exactly variable 0 free, standing for the scrutinee
    (shifted occurrences included).  When the motive actually depends on the
    scrutinee, unit eliminations bridge the bound unit payloads to ``star``
    so the result checks without any uniqueness rules.
    """
    dep = T.free_in(motive_body, 0)

    def motive_at(repl: Term) -> Term:
        # annotate: the replacement lands in scrutinee positions of the
        # motive, which must stay inferable
        return T.subst(motive_body, 0, T.Ann(repl, fin_type(k)))

    if k == 0:
        return T.EmptyElim(T.Lam(motive_body), scrut)
    if k == 1:
        if dep:
            return T.UnitElim(T.Lam(motive_body), leaf(0), scrut)
        return leaf(0)
    if dep:
        case_left = T.Lam(
            T.UnitElim(T.Lam(motive_at(T.Inl(T.Var(0)))), leaf(0), T.Var(0))
        )
    else:
        case_left = T.Lam(leaf(0))
    inner = _case_tree(
        k - 1,
        lambda i: leaf(i + 1),
        T.Var(0),
        motive_at(T.Inr(T.Var(0))),
    )
    return T.SumElim(T.Lam(motive_body), case_left, T.Lam(inner), scrut)


def _subset_pred(s: Subset) -> Term:
    """Decidable predicate ``carrier -> U0`` selecting the subset."""
    body = _case_tree(
        s.size,
        lambda i: T.Unit() if s.contains(i) else T.Empty(),
        T.Var(0),
        T.Univ(),
    )
    return T.Lam(body)


def _labels_body(ax: FiniteAxiomSet) -> Term:
    """Label-set family body with variable 0 as the atom (a type code)."""
    return _case_tree(
        ax.size, lambda a: fin_type(len(ax.labels[a])), T.Var(0), T.Univ()
    )


def instance_terms(ax: FiniteAxiomSet, v: Subset):
    """Closed kernel terms (carrier, labels family, axioms family, subset)."""
    k = ax.size
    carrier = fin_type(k)
    labels = T.Lam(_labels_body(ax))

    def axioms_for(a: int) -> Term:
        # (i : I(a)) -> carrier -> U0, by case split on the label
        body = _case_tree(
            len(ax.labels[a]),
            lambda li: _subset_pred(ax.covers[a][li]),
            T.Var(0),
            T.Pi(carrier, T.Univ()),
        )
        return T.Lam(body)

    # motive body inlines the label family to stay inferable
    axioms_motive = T.Pi(_labels_body(ax), T.Pi(carrier, T.Univ()))
    axioms = T.Lam(_case_tree(k, axioms_for, T.Var(0), axioms_motive))
    subset = _subset_pred(v)
    return carrier, labels, axioms, subset


def cover_type(ax: FiniteAxiomSet, v: Subset, atom: int) -> Term:
    carrier, labels, axioms, subset = instance_terms(ax, v)
    return T.App(T.Cover(carrier, labels, axioms, subset), fin_elem(atom, ax.size))


def extract_proof_term(ax: FiniteAxiomSet, v: Subset, d: Derivation) -> Term:
    """Kernel proof term for a derivation; checks flag-free at the cover type."""
    k = ax.size
    carrier, labels, axioms, subset = instance_terms(ax, v)
    cover_fam = T.Cover(carrier, labels, axioms, subset)

    def cover_at(a: int) -> Term:
        return T.App(cover_fam, fin_elem(a, k))

    def build(node) -> Term:
        if isinstance(node, RfNode):
            return T.Rf(fin_elem(node.atom, k), T.Star())
        cov = ax.covers[node.atom][node.label]
        children = dict(zip(cov.indices(), node.children))
        elem_a = fin_elem(node.atom, k)
        elem_i = fin_elem(node.label, len(ax.labels[node.atom]))

        # premise family: (b : carrier) -> C(a, i, b) -> b covered; the
        # domain inlines the chosen axiom's subset predicate (convertible
        # with the cover's axiom family at these canonical arguments)
        def leaf(b: int) -> Term:
            if cov.contains(b):
                return T.Lam(build(children[b]))
            return T.Lam(T.EmptyElim(T.Lam(cover_at(b)), T.Var(0)))

        dom_body = _case_tree(
            k,
            lambda b: T.Unit() if cov.contains(b) else T.Empty(),
            T.Var(0),
            T.Univ(),
        )
        premise_motive = T.Pi(dom_body, T.App(cover_fam, T.Var(1)))
        body = _case_tree(k, leaf, T.Var(0), premise_motive)
        return T.Tr(elem_a, elem_i, T.Lam(body))

    return build(d)


# --- the axiom-set file format ------------------------------------------------------


@dataclass
class CoverFile:
    axiom_set: FiniteAxiomSet
    subsets: dict  # name -> Subset
    queries: list  # (atom index, subset name)


def load_axiom_set(text: str) -> CoverFile:
    """Line format: ``carrier``, ``axiom``, ``subset`` and ``query`` items."""
    carrier: Optional[tuple[str, ...]] = None
    labels: list[list[str]] = []
    covers: list[list[Subset]] = []
    subsets: dict = {}
    queries: list = []

    def atom_index(atom: str, ln: int) -> int:
        if carrier is None or atom not in carrier:
            raise FormatError(f"unknown atom {atom!r}", ln)
        return carrier.index(atom)

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        match parts:
            case ["carrier", *atoms]:
                if carrier is not None:
                    raise FormatError("duplicate carrier line", ln)
                if not atoms:
                    raise FormatError("carrier must list at least one atom", ln)
                if len(set(atoms)) != len(atoms):
                    raise FormatError("duplicate atom in carrier", ln)
                carrier = tuple(atoms)
                labels = [[] for _ in atoms]
                covers = [[] for _ in atoms]
            case ["axiom", atom, label, ":", *members]:
                if carrier is None:
                    raise FormatError("carrier must come first", ln)
                a = atom_index(atom, ln)
                if label in labels[a]:
                    raise FormatError(f"duplicate label {label!r} for atom {atom!r}", ln)
                idxs = [atom_index(m, ln) for m in members]
                labels[a].append(label)
                covers[a].append(Subset.of(idxs, len(carrier)))
            case ["axiom", *_]:
                raise FormatError("malformed axiom line (expected 'axiom a i : b ...')", ln)
            case ["subset", name, ":", *members]:
                if carrier is None:
                    raise FormatError("carrier must come first", ln)
                if name in subsets:
                    raise FormatError(f"duplicate subset {name!r}", ln)
                idxs = [atom_index(m, ln) for m in members]
                subsets[name] = Subset.of(idxs, len(carrier))
            case ["subset", *_]:
                raise FormatError("malformed subset line (expected 'subset V : a ...')", ln)
            case ["query", atom, name]:
                if carrier is None:
                    raise FormatError("carrier must come first", ln)
                a = atom_index(atom, ln)
                if name not in subsets:
                    raise FormatError(f"unknown subset {name!r}", ln)
                queries.append((a, name))
            case _:
                raise FormatError(f"unrecognized item {parts[0]!r}", ln)

    if carrier is None:
        raise FormatError("missing carrier line", 1)
    ax = FiniteAxiomSet(
        carrier,
        tuple(tuple(ls) for ls in labels),
        tuple(tuple(cs) for cs in covers),
    )
    return CoverFile(ax, subsets, queries)


def render_derivation(ax: FiniteAxiomSet, d: Derivation, indent: int = 1) -> list[str]:
    pad = "  " * indent
    if isinstance(d, RfNode):
        return [f"{pad}rf {ax.carrier[d.atom]}"]
    lines = [f"{pad}tr {ax.carrier[d.atom]} {ax.labels[d.atom][d.label]}"]
    for child in d.children:
        lines.extend(render_derivation(ax, child, indent + 1))
    return lines


def run_queries(cf: CoverFile, with_derivations: bool = False) -> list[str]:
    out = []
    for atom, name in cf.queries:
        v = cf.subsets[name]
        covered = least_cover(cf.axiom_set, v).contains(atom)
        word = "covered" if covered else "uncovered"
        out.append(f"{cf.axiom_set.carrier[atom]} {name} {word}")
        if with_derivations and covered:
            d = derivation(cf.axiom_set, v, atom)
            out.extend(render_derivation(cf.axiom_set, d))
    return out
