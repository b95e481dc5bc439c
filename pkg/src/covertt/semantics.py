"""Evaluation into a semantic domain and type-directed readback.

Conversion is checked by evaluating both sides, reading the values back to
beta-normal terms and comparing structurally.  The uniqueness rules for
functions, pairs and the unit type are implemented in readback only: values
at Pi type are re-expanded to lambdas when ``eta_pi`` is on, values at Sigma
type become pairs of their projections under ``eta_sigma``, and at the unit
type every value reads back as ``star`` under ``eta_unit``.

``eta_unit`` additionally lets the unit eliminator fire on any scrutinee
(every inhabitant is judgmentally ``star`` under that rule), which is what
makes unit-type coercions between indexed families compute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from . import terms as T
from .terms import Flags, Term


class KernelBug(Exception):
    """Internal invariant violation: evaluation hit an ill-typed shape.

    Callers guarantee typedness, so this indicates a bug, not a user error.
    """


class EvalBudgetExceeded(Exception):
    """The step guard tripped; primitive recursion should always terminate."""


# --- values -------------------------------------------------------------------


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class VSort(Value):
    """``U0``, the large classification ``Type``, or the any-sort checking target."""

    kind: str  # "u0" | "type" | "any"


V_U0 = VSort("u0")
V_TYPE = VSort("type")
V_ANY = VSort("any")


@dataclass(frozen=True)
class Closure:
    env: tuple
    body: Term


@dataclass(frozen=True)
class PyClosure:
    fn: Callable[[Value], Value]


Clo = Union[Closure, PyClosure]


def constant_family(v: Value) -> PyClosure:
    return PyClosure(lambda _arg: v)


@dataclass(frozen=True)
class VPi(Value):
    dom: Value
    cod: Clo


@dataclass(frozen=True)
class VLam(Value):
    clo: Clo


@dataclass(frozen=True)
class VSigma(Value):
    fst: Value
    snd: Clo


@dataclass(frozen=True)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True)
class VEmpty(Value):
    pass


@dataclass(frozen=True)
class VUnit(Value):
    pass


@dataclass(frozen=True)
class VStar(Value):
    pass


@dataclass(frozen=True)
class VSum(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VInl(Value):
    value: Value


@dataclass(frozen=True)
class VInr(Value):
    value: Value


@dataclass(frozen=True)
class VId(Value):
    type: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True)
class VRefl(Value):
    value: Value


@dataclass(frozen=True)
class VW(Value):
    label: Value
    branch: Value


@dataclass(frozen=True)
class VSup(Value):
    label: Value
    branch: Value


@dataclass(frozen=True)
class VDW(Value):
    index: Value
    names: Value
    branch: Value
    arity: Value


@dataclass(frozen=True)
class VDWApp(Value):
    fam: VDW
    idx: Value


@dataclass(frozen=True)
class VDSup(Value):
    index: Value
    name: Value
    branch: Value


@dataclass(frozen=True)
class VWP(Value):
    index: Value
    names: Value
    rules: Value


@dataclass(frozen=True)
class VWPApp(Value):
    fam: VWP
    idx: Value


@dataclass(frozen=True)
class VInd(Value):
    index: Value
    name: Value
    premises: Value


@dataclass(frozen=True)
class VCover(Value):
    carrier: Value
    labels: Value
    axioms: Value
    subset: Value


@dataclass(frozen=True)
class VCoverApp(Value):
    fam: VCover
    elem: Value


@dataclass(frozen=True)
class VRf(Value):
    element: Value
    membership: Value


@dataclass(frozen=True)
class VTr(Value):
    element: Value
    label: Value
    premises: Value


# --- neutrals ----------------------------------------------------------------------


@dataclass(frozen=True)
class HVar:
    level: int
    type: Value


@dataclass(frozen=True)
class HConst:
    name: str
    type: Value


@dataclass(frozen=True)
class FApp:
    arg: Value


@dataclass(frozen=True)
class FProj1:
    pass


@dataclass(frozen=True)
class FProj2:
    pass


@dataclass(frozen=True)
class FSigElim:
    motive: Value
    case: Value


@dataclass(frozen=True)
class FSumElim:
    motive: Value
    case_left: Value
    case_right: Value


@dataclass(frozen=True)
class FUnitElim:
    motive: Value
    case: Value


@dataclass(frozen=True)
class FEmptyElim:
    motive: Value


@dataclass(frozen=True)
class FJ:
    motive: Value
    refl_case: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True)
class FWElim:
    motive: Value
    step: Value


@dataclass(frozen=True)
class FDWElim:
    motive: Value
    step: Value


@dataclass(frozen=True)
class FWPElim:
    motive: Value
    step: Value


@dataclass(frozen=True)
class FCoverElim:
    motive: Value
    rf_case: Value
    tr_case: Value


@dataclass(frozen=True)
class VNeutral(Value):
    head: Union[HVar, HConst]
    frames: tuple = ()


def fresh(level: int, ty: Value) -> VNeutral:
    return VNeutral(HVar(level, ty))


# --- the evaluator -------------------------------------------------------------------


@dataclass
class GlobalEntry:
    type_value: Value
    value: Value
    type_term: Term
    body_term: Optional[Term]


class Evaluator:
    """Shared machinery for evaluation, readback and conversion.

    Values are immutable; an evaluator instance only carries the global
    environment, the flag set and a step budget, so it is safe to share
    across threads for read-only use.
    """

    def __init__(self, globals_env=None, flags: Flags = Flags(), step_limit: int = 2_000_000):
        self.globals = globals_env if globals_env is not None else {}
        self.flags = flags
        self.step_limit = step_limit
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise EvalBudgetExceeded(
                f"evaluation exceeded {self.step_limit} eliminator steps"
            )

    # -- closures

    def apply_clo(self, clo: Clo, arg: Value) -> Value:
        if isinstance(clo, PyClosure):
            return clo.fn(arg)
        return self.eval(clo.env + (arg,), clo.body)

    # -- application and projections

    def apply(self, f: Value, arg: Value) -> Value:
        match f:
            case VLam(clo):
                self._tick()
                return self.apply_clo(clo, arg)
            case VDW():
                return VDWApp(f, arg)
            case VWP():
                return VWPApp(f, arg)
            case VCover():
                return VCoverApp(f, arg)
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FApp(arg),))
        raise KernelBug(f"application of non-function value {type(f).__name__}")

    def apply_many(self, f: Value, *args: Value) -> Value:
        for a in args:
            f = self.apply(f, a)
        return f

    def proj1(self, v: Value) -> Value:
        match v:
            case VPair(a, _):
                return a
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FProj1(),))
        raise KernelBug("fst of non-pair")

    def proj2(self, v: Value) -> Value:
        match v:
            case VPair(_, b):
                return b
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FProj2(),))
        raise KernelBug("snd of non-pair")

    # -- eliminators

    def sig_elim(self, motive: Value, case: Value, s: Value) -> Value:
        match s:
            case VPair(a, b):
                self._tick()
                return self.apply_many(case, a, b)
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FSigElim(motive, case),))
        raise KernelBug("split on non-pair")

    def sum_elim(self, motive: Value, cl: Value, cr: Value, s: Value) -> Value:
        match s:
            case VInl(x):
                self._tick()
                return self.apply(cl, x)
            case VInr(x):
                self._tick()
                return self.apply(cr, x)
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FSumElim(motive, cl, cr),))
        raise KernelBug("case on non-injection")

    def unit_elim(self, motive: Value, case: Value, s: Value) -> Value:
        # Under eta_unit every element of N1 equals star, so the eliminator
        # may fire regardless of the scrutinee.
        if isinstance(s, VStar) or self.flags.eta_unit:
            self._tick()
            return case
        match s:
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FUnitElim(motive, case),))
        raise KernelBug("unitElim on non-unit value")

    def empty_elim(self, motive: Value, s: Value) -> Value:
        match s:
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FEmptyElim(motive),))
        raise KernelBug("absurd applied to a canonical value")

    def j_elim(self, motive: Value, d: Value, lhs: Value, rhs: Value, p: Value) -> Value:
        match p:
            case VRefl(x):
                self._tick()
                return self.apply(d, x)
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FJ(motive, d, lhs, rhs),))
        raise KernelBug("J on non-identity value")

    def w_elim(self, motive: Value, step: Value, s: Value) -> Value:
        match s:
            case VSup(a, f):
                self._tick()
                rec = PyClosure(
                    lambda b: self.w_elim(motive, step, self.apply(f, b))
                )
                return self.apply_many(step, a, f, VLam(rec))
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FWElim(motive, step),))
        raise KernelBug("elimW on non-sup value")

    def dw_elim(self, motive: Value, step: Value, s: Value) -> Value:
        match s:
            case VDSup(i, n, f):
                self._tick()
                rec = PyClosure(
                    lambda b: self.dw_elim(motive, step, self.apply(f, b))
                )
                return self.apply_many(step, i, n, f, VLam(rec))
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FDWElim(motive, step),))
        raise KernelBug("elimDW on non-dsup value")

    def wp_elim(self, motive: Value, step: Value, s: Value) -> Value:
        match s:
            case VInd(i, n, f):
                self._tick()
                rec = PyClosure(
                    lambda j: VLam(
                        PyClosure(
                            lambda r: self.wp_elim(
                                motive, step, self.apply_many(f, j, r)
                            )
                        )
                    )
                )
                return self.apply_many(step, i, n, f, VLam(rec))
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FWPElim(motive, step),))
        raise KernelBug("elimWP on non-ind value")

    def cover_elim(self, motive: Value, q1: Value, q2: Value, s: Value) -> Value:
        match s:
            case VRf(a, r):
                self._tick()
                return self.apply_many(q1, a, r)
            case VTr(a, i, f):
                self._tick()
                rec = PyClosure(
                    lambda b: VLam(
                        PyClosure(
                            lambda t: self.cover_elim(
                                motive, q1, q2, self.apply_many(f, b, t)
                            )
                        )
                    )
                )
                return self.apply_many(q2, a, i, f, VLam(rec))
            case VNeutral(head, frames):
                return VNeutral(head, frames + (FCoverElim(motive, q1, q2),))
        raise KernelBug("elimCover on non-canonical cover proof")

    # -- evaluation

    def eval(self, env: tuple, t: Term) -> Value:
        match t:
            case T.Var(i):
                return env[-1 - i]
            case T.Const(name):
                entry = self.globals.get(name)
                if entry is None:
                    raise KernelBug(f"unbound constant {name!r} during evaluation")
                return entry.value
            case T.Ann(tm, _):
                return self.eval(env, tm)
            case T.Univ():
                return V_U0
            case T.TypeSort():
                return V_TYPE
            case T.Empty():
                return VEmpty()
            case T.Unit():
                return VUnit()
            case T.Star():
                return VStar()
            case T.Pi(dom, cod):
                return VPi(self.eval(env, dom), Closure(env, cod))
            case T.Lam(body):
                return VLam(Closure(env, body))
            case T.App(f, a):
                return self.apply(self.eval(env, f), self.eval(env, a))
            case T.Sigma(fst, snd):
                return VSigma(self.eval(env, fst), Closure(env, snd))
            case T.Pair(a, b):
                return VPair(self.eval(env, a), self.eval(env, b))
            case T.Proj1(p):
                return self.proj1(self.eval(env, p))
            case T.Proj2(p):
                return self.proj2(self.eval(env, p))
            case T.SigElim(m, c, s):
                return self.sig_elim(self.eval(env, m), self.eval(env, c), self.eval(env, s))
            case T.Sum(l, r):
                return VSum(self.eval(env, l), self.eval(env, r))
            case T.Inl(x):
                return VInl(self.eval(env, x))
            case T.Inr(x):
                return VInr(self.eval(env, x))
            case T.SumElim(m, cl, cr, s):
                return self.sum_elim(
                    self.eval(env, m), self.eval(env, cl), self.eval(env, cr), self.eval(env, s)
                )
            case T.Id(ty, a, b):
                return VId(self.eval(env, ty), self.eval(env, a), self.eval(env, b))
            case T.Refl(x):
                return VRefl(self.eval(env, x))
            case T.J(m, d, a, b, p):
                return self.j_elim(
                    self.eval(env, m),
                    self.eval(env, d),
                    self.eval(env, a),
                    self.eval(env, b),
                    self.eval(env, p),
                )
            case T.UnitElim(m, c, s):
                return self.unit_elim(self.eval(env, m), self.eval(env, c), self.eval(env, s))
            case T.EmptyElim(m, s):
                return self.empty_elim(self.eval(env, m), self.eval(env, s))
            case T.W(a, b):
                return VW(self.eval(env, a), self.eval(env, b))
            case T.Sup(a, f):
                return VSup(self.eval(env, a), self.eval(env, f))
            case T.WElim(m, d, s):
                return self.w_elim(self.eval(env, m), self.eval(env, d), self.eval(env, s))
            case T.DW(i, n, br, ar):
                return VDW(
                    self.eval(env, i), self.eval(env, n), self.eval(env, br), self.eval(env, ar)
                )
            case T.DSup(i, n, f):
                return VDSup(self.eval(env, i), self.eval(env, n), self.eval(env, f))
            case T.DWElim(m, d, _i, s):
                return self.dw_elim(self.eval(env, m), self.eval(env, d), self.eval(env, s))
            case T.WP(i, n, r):
                return VWP(self.eval(env, i), self.eval(env, n), self.eval(env, r))
            case T.Ind(i, n, f):
                return VInd(self.eval(env, i), self.eval(env, n), self.eval(env, f))
            case T.WPElim(m, c, _i, s):
                return self.wp_elim(self.eval(env, m), self.eval(env, c), self.eval(env, s))
            case T.Cover(a, i, c, v):
                return VCover(
                    self.eval(env, a), self.eval(env, i), self.eval(env, c), self.eval(env, v)
                )
            case T.Rf(a, r):
                return VRf(self.eval(env, a), self.eval(env, r))
            case T.Tr(a, i, f):
                return VTr(self.eval(env, a), self.eval(env, i), self.eval(env, f))
            case T.CoverElim(m, q1, q2, _a, s):
                return self.cover_elim(
                    self.eval(env, m),
                    self.eval(env, q1),
                    self.eval(env, q2),
                    self.eval(env, s),
                )
        raise KernelBug(f"eval: unhandled term {type(t).__name__}")

    # -- readback ------------------------------------------------------------

    def readback(self, v: Value, ty: Value, depth: int) -> Term:
        """Type-directed readback to a beta-normal term."""
        flags = self.flags
        match ty:
            case VSort():
                return self.readback_type(v, depth)
            case VPi(dom, cod):
                if flags.eta_pi:
                    var = fresh(depth, dom)
                    return T.Lam(
                        self.readback(self.apply(v, var), self.apply_clo(cod, var), depth + 1)
                    )
                if isinstance(v, VLam):
                    var = fresh(depth, dom)
                    return T.Lam(
                        self.readback(
                            self.apply_clo(v.clo, var), self.apply_clo(cod, var), depth + 1
                        )
                    )
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                # bare family formers are values of large function type
                if isinstance(v, (VDW, VWP, VCover)):
                    return self.readback_type_former(v, depth)
                raise KernelBug("readback: non-function at Pi type")
            case VSigma(dom, cod):
                if flags.eta_sigma:
                    a = self.proj1(v)
                    return T.Pair(
                        self.readback(a, dom, depth),
                        self.readback(self.proj2(v), self.apply_clo(cod, a), depth),
                    )
                if isinstance(v, VPair):
                    return T.Pair(
                        self.readback(v.fst, dom, depth),
                        self.readback(v.snd, self.apply_clo(cod, v.fst), depth),
                    )
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                raise KernelBug("readback: non-pair at Sigma type")
            case VUnit():
                if flags.eta_unit:
                    return T.Star()
                if isinstance(v, VStar):
                    return T.Star()
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at unit type")
            case VId(ity, _, _):
                if isinstance(v, VRefl):
                    return T.Refl(self.readback(v.value, ity, depth))
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at Id type")
            case VSum(l, r):
                match v:
                    case VInl(x):
                        return T.Inl(self.readback(x, l, depth))
                    case VInr(x):
                        return T.Inr(self.readback(x, r, depth))
                    case VNeutral():
                        return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at Sum type")
            case VW(a, b):
                match v:
                    case VSup(lab, f):
                        branch_ty = VPi(self.apply(b, lab), constant_family(ty))
                        return T.Sup(
                            self.readback(lab, a, depth), self.readback(f, branch_ty, depth)
                        )
                    case VNeutral():
                        return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at W type")
            case VDWApp(fam, _):
                match v:
                    case VDSup(i, n, f):
                        ity = fam.index
                        nty = self.apply(fam.names, i)
                        brty = self.apply_many(fam.branch, i, n)
                        f_ty = VPi(
                            brty,
                            PyClosure(
                                lambda b: VDWApp(fam, self.apply_many(fam.arity, i, n, b))
                            ),
                        )
                        return T.DSup(
                            self.readback(i, ity, depth),
                            self.readback(n, nty, depth),
                            self.readback(f, f_ty, depth),
                        )
                    case VNeutral():
                        return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at DW type")
            case VWPApp(fam, _):
                match v:
                    case VInd(i, n, f):
                        ity = fam.index
                        nty = self.apply(fam.names, i)
                        f_ty = VPi(
                            ity,
                            PyClosure(
                                lambda j: VPi(
                                    self.apply_many(fam.rules, i, n, j),
                                    constant_family(VWPApp(fam, j)),
                                )
                            ),
                        )
                        return T.Ind(
                            self.readback(i, ity, depth),
                            self.readback(n, nty, depth),
                            self.readback(f, f_ty, depth),
                        )
                    case VNeutral():
                        return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at WP type")
            case VCoverApp(fam, _):
                match v:
                    case VRf(a, r):
                        return T.Rf(
                            self.readback(a, fam.carrier, depth),
                            self.readback(r, self.apply(fam.subset, a), depth),
                        )
                    case VTr(a, i, f):
                        lty = self.apply(fam.labels, a)
                        f_ty = VPi(
                            fam.carrier,
                            PyClosure(
                                lambda b: VPi(
                                    self.apply_many(fam.axioms, a, i, b),
                                    constant_family(VCoverApp(fam, b)),
                                )
                            ),
                        )
                        return T.Tr(
                            self.readback(a, fam.carrier, depth),
                            self.readback(i, lty, depth),
                            self.readback(f, f_ty, depth),
                        )
                    case VNeutral():
                        return self.readback_neutral(v, depth)
                raise KernelBug("readback: bad value at cover type")
            case VEmpty():
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                raise KernelBug("readback: canonical value at empty type")
            case VNeutral():
                # stuck type: only neutral inhabitants are possible
                if isinstance(v, VNeutral):
                    return self.readback_neutral(v, depth)
                raise KernelBug("readback: canonical value at stuck type")
        raise KernelBug(f"readback: unhandled type value {type(ty).__name__}")

    def readback_type_former(self, v: Value, depth: int) -> Term:
        match v:
            case VDW(i, n, br, ar):
                ity = i
                return T.DW(
                    self.readback_type(i, depth),
                    self.readback(n, VPi(ity, constant_family(V_ANY)), depth),
                    self.readback(
                        br,
                        VPi(
                            ity,
                            PyClosure(
                                lambda iv: VPi(self.apply(n, iv), constant_family(V_ANY))
                            ),
                        ),
                        depth,
                    ),
                    self.readback(
                        ar,
                        VPi(
                            ity,
                            PyClosure(
                                lambda iv: VPi(
                                    self.apply(n, iv),
                                    PyClosure(
                                        lambda nv: VPi(
                                            self.apply_many(br, iv, nv),
                                            constant_family(ity),
                                        )
                                    ),
                                )
                            ),
                        ),
                        depth,
                    ),
                )
            case VWP(i, n, r):
                ity = i
                return T.WP(
                    self.readback_type(i, depth),
                    self.readback(n, VPi(ity, constant_family(V_ANY)), depth),
                    self.readback(
                        r,
                        VPi(
                            ity,
                            PyClosure(
                                lambda iv: VPi(
                                    self.apply(n, iv),
                                    constant_family(VPi(ity, constant_family(V_ANY))),
                                )
                            ),
                        ),
                        depth,
                    ),
                )
            case VCover(a, i, c, vv):
                aty = a
                return T.Cover(
                    self.readback_type(a, depth),
                    self.readback(i, VPi(aty, constant_family(V_ANY)), depth),
                    self.readback(
                        c,
                        VPi(
                            aty,
                            PyClosure(
                                lambda av: VPi(
                                    self.apply(i, av),
                                    constant_family(VPi(aty, constant_family(V_ANY))),
                                )
                            ),
                        ),
                        depth,
                    ),
                    self.readback(vv, VPi(aty, constant_family(V_ANY)), depth),
                )
        raise KernelBug("readback_type_former: not a family former")

    def readback_type(self, v: Value, depth: int) -> Term:
        match v:
            case VSort("u0"):
                return T.Univ()
            case VSort("type") | VSort("any"):
                return T.TypeSort()
            case VEmpty():
                return T.Empty()
            case VUnit():
                return T.Unit()
            case VPi(dom, cod):
                var = fresh(depth, dom)
                return T.Pi(
                    self.readback_type(dom, depth),
                    self.readback_type(self.apply_clo(cod, var), depth + 1),
                )
            case VSigma(dom, cod):
                var = fresh(depth, dom)
                return T.Sigma(
                    self.readback_type(dom, depth),
                    self.readback_type(self.apply_clo(cod, var), depth + 1),
                )
            case VSum(l, r):
                return T.Sum(self.readback_type(l, depth), self.readback_type(r, depth))
            case VId(ty, a, b):
                return T.Id(
                    self.readback_type(ty, depth),
                    self.readback(a, ty, depth),
                    self.readback(b, ty, depth),
                )
            case VW(a, b):
                return T.W(
                    self.readback_type(a, depth),
                    self.readback(b, VPi(a, constant_family(V_ANY)), depth),
                )
            case VDWApp(fam, idx):
                return T.App(
                    self.readback_type_former(fam, depth),
                    self.readback(idx, fam.index, depth),
                )
            case VWPApp(fam, idx):
                return T.App(
                    self.readback_type_former(fam, depth),
                    self.readback(idx, fam.index, depth),
                )
            case VCoverApp(fam, elem):
                return T.App(
                    self.readback_type_former(fam, depth),
                    self.readback(elem, fam.carrier, depth),
                )
            case VDW() | VWP() | VCover():
                return self.readback_type_former(v, depth)
            case VNeutral():
                return self.readback_neutral(v, depth)
        raise KernelBug(f"readback_type: not a type value: {type(v).__name__}")

    # -- neutral spines --------------------------------------------------------

    def readback_neutral(self, v: VNeutral, depth: int) -> Term:
        term, _ = self.readback_spine(v, depth)
        return term

    def readback_spine(self, v: VNeutral, depth: int):
        head = v.head
        if isinstance(head, HVar):
            if head.level >= depth:
                raise KernelBug("readback: variable level out of scope")
            acc: Term = T.Var(depth - 1 - head.level)
        else:
            acc = T.Const(head.name)
        cur = head.type
        prefix: tuple = ()
        for frame in v.frames:
            scrut = VNeutral(head, prefix)
            acc, cur = self.readback_frame(acc, cur, scrut, frame, depth)
            prefix = prefix + (frame,)
        return acc, cur

    def readback_frame(self, acc: Term, cur: Value, scrut: VNeutral, frame, depth: int):
        ev = self
        match frame:
            case FApp(arg):
                if not isinstance(cur, VPi):
                    raise KernelBug("readback: application at non-function type")
                term = T.App(acc, self.readback(arg, cur.dom, depth))
                return term, self.apply_clo(cur.cod, arg)
            case FProj1():
                if not isinstance(cur, VSigma):
                    raise KernelBug("readback: fst at non-Sigma type")
                return T.Proj1(acc), cur.fst
            case FProj2():
                if not isinstance(cur, VSigma):
                    raise KernelBug("readback: snd at non-Sigma type")
                fst_val = self.proj1(scrut)
                return T.Proj2(acc), self.apply_clo(cur.snd, fst_val)
            case FSigElim(motive, case):
                if not isinstance(cur, VSigma):
                    raise KernelBug("readback: split at non-Sigma type")
                sig = cur
                m_ty = VPi(sig, constant_family(V_ANY))
                case_ty = VPi(
                    sig.fst,
                    PyClosure(
                        lambda a: VPi(
                            ev.apply_clo(sig.snd, a),
                            PyClosure(lambda b: ev.apply(motive, VPair(a, b))),
                        )
                    ),
                )
                term = T.SigElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(case, case_ty, depth),
                    acc,
                )
                return term, self.apply(motive, scrut)
            case FSumElim(motive, cl, cr):
                if not isinstance(cur, VSum):
                    raise KernelBug("readback: case at non-Sum type")
                m_ty = VPi(cur, constant_family(V_ANY))
                cl_ty = VPi(cur.left, PyClosure(lambda x: ev.apply(motive, VInl(x))))
                cr_ty = VPi(cur.right, PyClosure(lambda x: ev.apply(motive, VInr(x))))
                term = T.SumElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(cl, cl_ty, depth),
                    self.readback(cr, cr_ty, depth),
                    acc,
                )
                return term, self.apply(motive, scrut)
            case FUnitElim(motive, case):
                m_ty = VPi(VUnit(), constant_family(V_ANY))
                term = T.UnitElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(case, self.apply(motive, VStar()), depth),
                    acc,
                )
                return term, self.apply(motive, scrut)
            case FEmptyElim(motive):
                m_ty = VPi(VEmpty(), constant_family(V_ANY))
                term = T.EmptyElim(self.readback(motive, m_ty, depth), acc)
                return term, self.apply(motive, scrut)
            case FJ(motive, d, lhs, rhs):
                if not isinstance(cur, VId):
                    raise KernelBug("readback: J at non-Id type")
                a_ty = cur.type
                m_ty = VPi(
                    a_ty,
                    PyClosure(
                        lambda x: VPi(
                            a_ty,
                            PyClosure(
                                lambda y: VPi(
                                    VId(a_ty, x, y), constant_family(V_ANY)
                                )
                            ),
                        )
                    ),
                )
                d_ty = VPi(
                    a_ty,
                    PyClosure(lambda x: ev.apply_many(motive, x, x, VRefl(x))),
                )
                term = T.J(
                    self.readback(motive, m_ty, depth),
                    self.readback(d, d_ty, depth),
                    self.readback(lhs, a_ty, depth),
                    self.readback(rhs, a_ty, depth),
                    acc,
                )
                return term, self.apply_many(motive, lhs, rhs, scrut)
            case FWElim(motive, step):
                if not isinstance(cur, VW):
                    raise KernelBug("readback: elimW at non-W type")
                w_ty = cur
                a_ty, b_fam = cur.label, cur.branch
                m_ty = VPi(w_ty, constant_family(V_ANY))
                step_ty = VPi(
                    a_ty,
                    PyClosure(
                        lambda a: VPi(
                            VPi(ev.apply(b_fam, a), constant_family(w_ty)),
                            PyClosure(
                                lambda f: VPi(
                                    VPi(
                                        ev.apply(b_fam, a),
                                        PyClosure(
                                            lambda b: ev.apply(motive, ev.apply(f, b))
                                        ),
                                    ),
                                    PyClosure(
                                        lambda h: ev.apply(motive, VSup(a, f))
                                    ),
                                )
                            ),
                        )
                    ),
                )
                term = T.WElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(step, step_ty, depth),
                    acc,
                )
                return term, self.apply(motive, scrut)
            case FDWElim(motive, step):
                if not isinstance(cur, VDWApp):
                    raise KernelBug("readback: elimDW at non-DW type")
                fam = cur.fam
                idx = cur.idx
                ity = fam.index
                m_ty = VPi(
                    ity,
                    PyClosure(lambda i: VPi(VDWApp(fam, i), constant_family(V_ANY))),
                )
                step_ty = VPi(
                    ity,
                    PyClosure(
                        lambda i: VPi(
                            ev.apply(fam.names, i),
                            PyClosure(
                                lambda n: VPi(
                                    VPi(
                                        ev.apply_many(fam.branch, i, n),
                                        PyClosure(
                                            lambda b: VDWApp(
                                                fam, ev.apply_many(fam.arity, i, n, b)
                                            )
                                        ),
                                    ),
                                    PyClosure(
                                        lambda f: VPi(
                                            VPi(
                                                ev.apply_many(fam.branch, i, n),
                                                PyClosure(
                                                    lambda b: ev.apply_many(
                                                        motive,
                                                        ev.apply_many(fam.arity, i, n, b),
                                                        ev.apply(f, b),
                                                    )
                                                ),
                                            ),
                                            PyClosure(
                                                lambda h: ev.apply_many(
                                                    motive, i, VDSup(i, n, f)
                                                )
                                            ),
                                        )
                                    ),
                                )
                            ),
                        )
                    ),
                )
                term = T.DWElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(step, step_ty, depth),
                    self.readback(idx, ity, depth),
                    acc,
                )
                return term, self.apply_many(motive, idx, scrut)
            case FWPElim(motive, step):
                if not isinstance(cur, VWPApp):
                    raise KernelBug("readback: elimWP at non-WP type")
                fam = cur.fam
                idx = cur.idx
                ity = fam.index
                m_ty = VPi(
                    ity,
                    PyClosure(lambda i: VPi(VWPApp(fam, i), constant_family(V_ANY))),
                )
                step_ty = VPi(
                    ity,
                    PyClosure(
                        lambda i: VPi(
                            ev.apply(fam.names, i),
                            PyClosure(
                                lambda n: VPi(
                                    VPi(
                                        ity,
                                        PyClosure(
                                            lambda j: VPi(
                                                ev.apply_many(fam.rules, i, n, j),
                                                constant_family(VWPApp(fam, j)),
                                            )
                                        ),
                                    ),
                                    PyClosure(
                                        lambda f: VPi(
                                            VPi(
                                                ity,
                                                PyClosure(
                                                    lambda j: VPi(
                                                        ev.apply_many(fam.rules, i, n, j),
                                                        PyClosure(
                                                            lambda r: ev.apply_many(
                                                                motive,
                                                                j,
                                                                ev.apply_many(f, j, r),
                                                            )
                                                        ),
                                                    )
                                                ),
                                            ),
                                            PyClosure(
                                                lambda h: ev.apply_many(
                                                    motive, i, VInd(i, n, f)
                                                )
                                            ),
                                        )
                                    ),
                                )
                            ),
                        )
                    ),
                )
                term = T.WPElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(step, step_ty, depth),
                    self.readback(idx, ity, depth),
                    acc,
                )
                return term, self.apply_many(motive, idx, scrut)
            case FCoverElim(motive, q1, q2):
                if not isinstance(cur, VCoverApp):
                    raise KernelBug("readback: elimCover at non-cover type")
                fam = cur.fam
                elem = cur.elem
                aty = fam.carrier
                m_ty = VPi(
                    aty,
                    PyClosure(lambda a: VPi(VCoverApp(fam, a), constant_family(V_ANY))),
                )
                q1_ty = VPi(
                    aty,
                    PyClosure(
                        lambda a: VPi(
                            ev.apply(fam.subset, a),
                            PyClosure(
                                lambda r: ev.apply_many(motive, a, VRf(a, r))
                            ),
                        )
                    ),
                )
                q2_ty = VPi(
                    aty,
                    PyClosure(
                        lambda a: VPi(
                            ev.apply(fam.labels, a),
                            PyClosure(
                                lambda i: VPi(
                                    VPi(
                                        aty,
                                        PyClosure(
                                            lambda b: VPi(
                                                ev.apply_many(fam.axioms, a, i, b),
                                                constant_family(VCoverApp(fam, b)),
                                            )
                                        ),
                                    ),
                                    PyClosure(
                                        lambda r: VPi(
                                            VPi(
                                                aty,
                                                PyClosure(
                                                    lambda b: VPi(
                                                        ev.apply_many(fam.axioms, a, i, b),
                                                        PyClosure(
                                                            lambda s: ev.apply_many(
                                                                motive,
                                                                b,
                                                                ev.apply_many(r, b, s),
                                                            )
                                                        ),
                                                    )
                                                ),
                                            ),
                                            PyClosure(
                                                lambda h: ev.apply_many(
                                                    motive, a, VTr(a, i, r)
                                                )
                                            ),
                                        )
                                    ),
                                )
                            ),
                        )
                    ),
                )
                term = T.CoverElim(
                    self.readback(motive, m_ty, depth),
                    self.readback(q1, q1_ty, depth),
                    self.readback(q2, q2_ty, depth),
                    self.readback(elem, aty, depth),
                    acc,
                )
                return term, self.apply_many(motive, elem, scrut)
        raise KernelBug(f"readback: unhandled frame {type(frame).__name__}")

    # -- conversion -------------------------------------------------------------

    def equal(self, a: Value, b: Value, ty: Value, depth: int) -> bool:
        return self.readback(a, ty, depth) == self.readback(b, ty, depth)

    def equal_types(self, a: Value, b: Value, depth: int) -> bool:
        return self.readback_type(a, depth) == self.readback_type(b, depth)
