from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from gradedkit.core.errors import OffGridError, PreconditionError, TypingError
from gradedkit.core.fincat import Category, FiniteCategory, opposite
from gradedkit.core.functors import ComputedFunctor, ComputedNatTrans, Functor, NatTrans
from gradedkit.core.monoidal import MonoidalCategory, PartialMonoidalCategory, StrictMonoidalCategory
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)

ProgressFn = Optional[Callable[[int], None]]


def _lookup(table: Dict[Any, Any], what: str) -> Callable[..., Any]:
    def get(*key):
        k = key if len(key) > 1 else key[0]
        try:
            return table[k]
        except KeyError:
            raise TypingError(f"{what} undefined at {describe(k)}") from None

    return get


def _samples(cat: Category, objects, morphisms):
    obs = list(cat.sample_objects() if objects is None else objects)
    mors = list(cat.sample_morphisms() if morphisms is None else morphisms)
    return obs, mors


def _composable(cat: Category, mors: Sequence[Any]):
    by_dom: Dict[Any, List[Any]] = {}
    for f in mors:
        by_dom.setdefault(cat.dom(f), []).append(f)
    return [(g, f) for f in mors for g in by_dom.get(cat.cod(f), [])]


class _Progress:
    def __init__(self, on_progress: ProgressFn, steps: int):
        self.cb = on_progress
        self.steps = max(1, steps)
        self.done = 0

    def step(self):
        self.done += 1
        if self.cb:
            self.cb(int(100 * self.done / self.steps))

    def finish(self):
        if self.cb and self.done < self.steps:
            self.done = self.steps
            self.cb(100)


@dataclass
class GradedMonadData:
    """
    T_ob(m, c), T_mor(m, f), T_u(u, c): T_m c -> T_m' c, eta(c): c -> T_I c and
    mu(m, n, c): T_m T_n c -> T_{m(x)n} c.
    """

    grading: MonoidalCategory
    base: Category
    T_ob: Callable[[Any, Any], Any]
    T_mor: Callable[[Any, Any], Any]
    T_u: Callable[[Any, Any], Any]
    eta: Callable[[Any], Any]
    mu: Callable[[Any, Any, Any], Any]
    name: str = "T"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tables(cls, grading, base, T_ob, T_mor, T_u, eta, mu, name="T") -> "GradedMonadData":
        return cls(
            grading,
            base,
            _lookup(T_ob, "T_ob"),
            _lookup(T_mor, "T_mor"),
            _lookup(T_u, "T_u"),
            _lookup(eta, "eta"),
            _lookup(mu, "mu"),
            name=name,
        )

    def act_mor(self, u: Any, f: Any) -> Any:
        """u * f = T_u,c' . T_m f for u: m -> m', f: c -> c'"""
        C = self.base
        m = self.grading.dom(u)
        return C.compose(self.T_u(u, C.cod(f)), self.T_mor(m, f))

    def functor(self, m: Any) -> Functor:
        return ComputedFunctor(self.base, self.base, lambda c: self.T_ob(m, c), lambda f: self.T_mor(m, f), name=f"{self.name}_{describe(m)}")

    def mu_nat(self, m: Any, n: Any) -> NatTrans:
        inner = ComputedFunctor(
            self.base,
            self.base,
            lambda c: self.T_ob(m, self.T_ob(n, c)),
            lambda f: self.T_mor(m, self.T_mor(n, f)),
            name=f"{self.name}_{describe(m)}{self.name}_{describe(n)}",
        )
        mn = self.grading.tensor_ob(m, n)
        return ComputedNatTrans(inner, self.functor(mn), lambda c: self.mu(m, n, c), name=f"mu_{describe(m)},{describe(n)}")

    def sample(self):
        return _samples(self.base, self.objects, self.morphisms)

    def as_lax_action(self) -> "LaxActionData":
        return LaxActionData(self.grading, self.base, self.T_ob, self.act_mor, self.eta, self.mu, name=self.name, objects=self.objects, morphisms=self.morphisms)


@dataclass
class GradedComonadData:
    grading: MonoidalCategory
    base: Category
    S_ob: Callable[[Any, Any], Any]
    S_mor: Callable[[Any, Any], Any]
    S_u: Callable[[Any, Any], Any]
    eps: Callable[[Any], Any]
    delta: Callable[[Any, Any, Any], Any]
    name: str = "S"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tables(cls, grading, base, S_ob, S_mor, S_u, eps, delta, name="S") -> "GradedComonadData":
        return cls(
            grading,
            base,
            _lookup(S_ob, "S_ob"),
            _lookup(S_mor, "S_mor"),
            _lookup(S_u, "S_u"),
            _lookup(eps, "eps"),
            _lookup(delta, "delta"),
            name=name,
        )

    def act_mor(self, u: Any, f: Any) -> Any:
        C = self.base
        m = self.grading.dom(u)
        return C.compose(self.S_u(u, C.cod(f)), self.S_mor(m, f))

    def sample(self):
        return _samples(self.base, self.objects, self.morphisms)


@dataclass
class LaxActionData:
    grading: MonoidalCategory
    base: Category
    act_ob: Callable[[Any, Any], Any]
    act_mor: Callable[[Any, Any], Any]
    eta: Callable[[Any], Any]
    mu: Callable[[Any, Any, Any], Any]
    name: str = "*"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None

    def as_graded_monad(self) -> GradedMonadData:
        M, C = self.grading, self.base
        return GradedMonadData(
            M,
            C,
            self.act_ob,
            lambda m, f: self.act_mor(M.identity(m), f),
            lambda u, c: self.act_mor(u, C.identity(c)),
            self.eta,
            self.mu,
            name=self.name,
            objects=self.objects,
            morphisms=self.morphisms,
        )


@dataclass
class StrictActionData:
    grading: MonoidalCategory
    carrier: Category
    act_ob: Callable[[Any, Any], Any]
    act_mor: Callable[[Any, Any], Any]
    name: str = "|>"

    def whisker(self, m: Any, w: Any) -> Any:
        return self.act_mor(self.grading.identity(m), w)


@dataclass
class AdjunctionData:
    left: Functor
    right: Functor
    unit: Callable[[Any], Any]
    counit: Callable[[Any], Any]
    name: str = "l-|r"

    @property
    def base(self) -> Category:
        return self.left.src

    @property
    def carrier(self) -> Category:
        return self.left.dst


# ---------- Law suites ----------


def check_graded_monad(gm: GradedMonadData, objects=None, morphisms=None, on_progress: ProgressFn = None) -> LawReport:
    M, C = gm.grading, gm.base
    obs, mors = _samples(C, objects if objects is not None else gm.objects, morphisms if morphisms is not None else gm.morphisms)
    gobs, gmors = M.objects(), M.morphisms()
    I = M.unit
    rep = LawReport(f"graded monad {gm.name}")
    prog = _Progress(on_progress, 9)

    # typing first; an ill-typed datum makes the equations meaningless
    def typed(axiom, thunk, expected, **w):
        rep.check(axiom, VALUES, lambda: ((C.dom(thunk()), C.cod(thunk())), expected()), **w)

    for m in gobs:
        for f in mors:
            typed("typing T_mor", lambda m=m, f=f: gm.T_mor(m, f), lambda m=m, f=f: (gm.T_ob(m, C.dom(f)), gm.T_ob(m, C.cod(f))), m=m, morphism=f)
    for u in gmors:
        for c in obs:
            typed("typing T_u", lambda u=u, c=c: gm.T_u(u, c), lambda u=u, c=c: (gm.T_ob(M.dom(u), c), gm.T_ob(M.cod(u), c)), u=u, object=c)
    for c in obs:
        typed("typing eta", lambda c=c: gm.eta(c), lambda c=c: (c, gm.T_ob(I, c)), object=c)
    for m in gobs:
        for n in gobs:
            for c in obs:
                typed(
                    "typing mu",
                    lambda m=m, n=n, c=c: gm.mu(m, n, c),
                    lambda m=m, n=n, c=c: (gm.T_ob(m, gm.T_ob(n, c)), gm.T_ob(M.tensor_ob(m, n), c)),
                    m=m, n=n, object=c,
                )
    prog.step()
    if not rep.passed:
        log.warning("graded monad %s is ill-typed; equations not checked", gm.name)
        return rep

    pairs = _composable(C, mors)
    for m in gobs:
        for c in obs:
            rep.check("T-functor", C, lambda m=m, c=c: (gm.T_mor(m, C.identity(c)), C.identity(gm.T_ob(m, c))), m=m, object=c)
        for g, f in pairs:
            rep.check("T-functor", C, lambda m=m, g=g, f=f: (gm.T_mor(m, C.compose(g, f)), C.compose(gm.T_mor(m, g), gm.T_mor(m, f))), m=m, pair=(g, f))
    prog.step()

    for u in gmors:
        m, m2 = M.dom(u), M.cod(u)
        for f in mors:
            rep.check(
                "T-natural",
                C,
                lambda u=u, m=m, m2=m2, f=f: (
                    C.compose(gm.T_mor(m2, f), gm.T_u(u, C.dom(f))),
                    C.compose(gm.T_u(u, C.cod(f)), gm.T_mor(m, f)),
                ),
                u=u, morphism=f,
            )
    for f in mors:
        rep.check("eta-natural", C, lambda f=f: (C.compose(gm.T_mor(I, f), gm.eta(C.dom(f))), C.compose(gm.eta(C.cod(f)), f)), morphism=f)
    for m in gobs:
        for n in gobs:
            for f in mors:
                rep.check(
                    "mu-natural",
                    C,
                    lambda m=m, n=n, f=f: (
                        C.compose(gm.T_mor(M.tensor_ob(m, n), f), gm.mu(m, n, C.dom(f))),
                        C.compose(gm.mu(m, n, C.cod(f)), gm.T_mor(m, gm.T_mor(n, f))),
                    ),
                    m=m, n=n, morphism=f,
                )
    prog.step()

    for m in gobs:
        for c in obs:
            rep.check("GM1", C, lambda m=m, c=c: (gm.T_u(M.identity(m), c), C.identity(gm.T_ob(m, c))), m=m, object=c)
    prog.step()

    for u2, u in _composable(M, gmors):
        for c in obs:
            rep.check("GM2", C, lambda u2=u2, u=u, c=c: (C.compose(gm.T_u(u2, c), gm.T_u(u, c)), gm.T_u(M.compose(u2, u), c)), u=u, u2=u2, object=c)
    prog.step()

    for u in gmors:
        for v in gmors:
            for c in obs:
                rep.check("GM3", C, lambda u=u, v=v, c=c: gm3_sides(gm, u, v, c), u=u, v=v, object=c)
    prog.step()

    for m in gobs:
        for c in obs:
            rep.check("GM4", C, lambda m=m, c=c: (C.compose(gm.mu(I, m, c), gm.eta(gm.T_ob(m, c))), C.identity(gm.T_ob(m, c))), m=m, object=c)
    prog.step()
    for m in gobs:
        for c in obs:
            rep.check("GM5", C, lambda m=m, c=c: (C.compose(gm.mu(m, I, c), gm.T_mor(m, gm.eta(c))), C.identity(gm.T_ob(m, c))), m=m, object=c)
    prog.step()

    for l in gobs:
        for m in gobs:
            for n in gobs:
                for c in obs:
                    rep.check("GM6", C, lambda l=l, m=m, n=n, c=c: gm6_sides(gm, l, m, n, c), l=l, m=m, n=n, object=c)
    prog.finish()
    log.info("checked graded monad %s: %s", gm.name, rep.counts())
    return rep


def star(gm: GradedMonadData, u: Any, v: Any, c: Any) -> Any:
    """(T_u * T_v)_c = T_u,T_n'c . T_m(T_v,c): T_m T_n c -> T_m' T_n' c"""
    M, C = gm.grading, gm.base
    n2 = M.cod(v)
    return C.compose(gm.T_u(u, gm.T_ob(n2, c)), gm.T_mor(M.dom(u), gm.T_u(v, c)))


def gm3_sides(gm: GradedMonadData, u: Any, v: Any, c: Any):
    M, C = gm.grading, gm.base
    m, n = M.dom(u), M.dom(v)
    uv = M.tensor_mor(u, v)
    lhs = C.compose(gm.mu(M.cod(u), M.cod(v), c), star(gm, u, v, c))
    rhs = C.compose(gm.T_u(uv, c), gm.mu(m, n, c))
    return lhs, rhs


def gm6_sides(gm: GradedMonadData, l: Any, m: Any, n: Any, c: Any):
    M, C = gm.grading, gm.base
    M.tensor_all(l, m, n)
    lhs = C.compose(gm.mu(M.tensor_ob(l, m), n, c), gm.mu(l, m, gm.T_ob(n, c)))
    rhs = C.compose(gm.mu(l, M.tensor_ob(m, n), c), gm.T_mor(l, gm.mu(m, n, c)))
    return lhs, rhs


def check_graded_comonad(gc: GradedComonadData, objects=None, morphisms=None, on_progress: ProgressFn = None) -> LawReport:
    M, C = gc.grading, gc.base
    obs, mors = _samples(C, objects if objects is not None else gc.objects, morphisms if morphisms is not None else gc.morphisms)
    gobs, gmors = M.objects(), M.morphisms()
    I = M.unit
    rep = LawReport(f"graded comonad {gc.name}")
    prog = _Progress(on_progress, 7)

    def typed(axiom, thunk, expected, **w):
        rep.check(axiom, VALUES, lambda: ((C.dom(thunk()), C.cod(thunk())), expected()), **w)

    for m in gobs:
        for f in mors:
            typed("typing S_mor", lambda m=m, f=f: gc.S_mor(m, f), lambda m=m, f=f: (gc.S_ob(m, C.dom(f)), gc.S_ob(m, C.cod(f))), m=m, morphism=f)
    for u in gmors:
        for c in obs:
            typed("typing S_u", lambda u=u, c=c: gc.S_u(u, c), lambda u=u, c=c: (gc.S_ob(M.dom(u), c), gc.S_ob(M.cod(u), c)), u=u, object=c)
    for c in obs:
        typed("typing eps", lambda c=c: gc.eps(c), lambda c=c: (gc.S_ob(I, c), c), object=c)
    for m in gobs:
        for n in gobs:
            for c in obs:
                typed(
                    "typing delta",
                    lambda m=m, n=n, c=c: gc.delta(m, n, c),
                    lambda m=m, n=n, c=c: (gc.S_ob(M.tensor_ob(m, n), c), gc.S_ob(m, gc.S_ob(n, c))),
                    m=m, n=n, object=c,
                )
    prog.step()
    if not rep.passed:
        log.warning("graded comonad %s is ill-typed; equations not checked", gc.name)
        return rep

    for m in gobs:
        for c in obs:
            rep.check("S-functor", C, lambda m=m, c=c: (gc.S_mor(m, C.identity(c)), C.identity(gc.S_ob(m, c))), m=m, object=c)
        for g, f in _composable(C, mors):
            rep.check("S-functor", C, lambda m=m, g=g, f=f: (gc.S_mor(m, C.compose(g, f)), C.compose(gc.S_mor(m, g), gc.S_mor(m, f))), m=m, pair=(g, f))
    for u in gmors:
        m, m2 = M.dom(u), M.cod(u)
        for f in mors:
            rep.check(
                "S-natural",
                C,
                lambda u=u, m=m, m2=m2, f=f: (
                    C.compose(gc.S_mor(m2, f), gc.S_u(u, C.dom(f))),
                    C.compose(gc.S_u(u, C.cod(f)), gc.S_mor(m, f)),
                ),
                u=u, morphism=f,
            )
    for f in mors:
        rep.check("eps-natural", C, lambda f=f: (C.compose(f, gc.eps(C.dom(f))), C.compose(gc.eps(C.cod(f)), gc.S_mor(I, f))), morphism=f)
    for m in gobs:
        for n in gobs:
            for f in mors:
                rep.check(
                    "delta-natural",
                    C,
                    lambda m=m, n=n, f=f: (
                        C.compose(gc.S_mor(m, gc.S_mor(n, f)), gc.delta(m, n, C.dom(f))),
                        C.compose(gc.delta(m, n, C.cod(f)), gc.S_mor(M.tensor_ob(m, n), f)),
                    ),
                    m=m, n=n, morphism=f,
                )
    prog.step()

    for m in gobs:
        for c in obs:
            rep.check("GC1", C, lambda m=m, c=c: (gc.S_u(M.identity(m), c), C.identity(gc.S_ob(m, c))), m=m, object=c)
    prog.step()
    for u2, u in _composable(M, gmors):
        for c in obs:
            rep.check("GC2", C, lambda u2=u2, u=u, c=c: (C.compose(gc.S_u(u2, c), gc.S_u(u, c)), gc.S_u(M.compose(u2, u), c)), u=u, u2=u2, object=c)
    prog.step()

    def gc3(u, v, c):
        m, m2, n, n2 = M.dom(u), M.cod(u), M.dom(v), M.cod(v)
        s = C.compose(gc.S_u(u, gc.S_ob(n2, c)), gc.S_mor(m, gc.S_u(v, c)))
        return C.compose(s, gc.delta(m, n, c)), C.compose(gc.delta(m2, n2, c), gc.S_u(M.tensor_mor(u, v), c))

    for u in gmors:
        for v in gmors:
            for c in obs:
                rep.check("GC3", C, lambda u=u, v=v, c=c: gc3(u, v, c), u=u, v=v, object=c)
    prog.step()
    for m in gobs:
        for c in obs:
            rep.check("GC4", C, lambda m=m, c=c: (C.compose(gc.eps(gc.S_ob(m, c)), gc.delta(I, m, c)), C.identity(gc.S_ob(m, c))), m=m, object=c)
            rep.check("GC5", C, lambda m=m, c=c: (C.compose(gc.S_mor(m, gc.eps(c)), gc.delta(m, I, c)), C.identity(gc.S_ob(m, c))), m=m, object=c)
    prog.step()
    for l in gobs:
        for m in gobs:
            for n in gobs:
                for c in obs:
                    rep.check(
                        "GC6",
                        C,
                        lambda l=l, m=m, n=n, c=c: (
                            C.compose(gc.delta(l, m, gc.S_ob(n, c)), gc.delta(M.tensor_ob(l, m), n, c)),
                            C.compose(gc.S_mor(l, gc.delta(m, n, c)), gc.delta(l, M.tensor_ob(m, n), c)),
                        ),
                        l=l, m=m, n=n, object=c,
                    )
    prog.step()
    prog.finish()
    log.info("checked graded comonad %s: %s", gc.name, rep.counts())
    return rep


# ---------- Duality ----------


class OppositeMonoidal(MonoidalCategory):
    def __init__(self, M: MonoidalCategory):
        self.original = M
        self.base = opposite(M.base)
        self.name = f"op({M.name})"
        self.unit = M.unit
        self.partial = M.partial

    def tensor_ob(self, m, n):
        return self.original.tensor_ob(m, n)

    def tensor_mor(self, u, v):
        return self.original.tensor_mor(u, v)


def opposite_monoidal(M: MonoidalCategory) -> MonoidalCategory:
    if isinstance(M, OppositeMonoidal):
        return M.original
    if isinstance(M, StrictMonoidalCategory) and isinstance(M.base, FiniteCategory):
        cls = PartialMonoidalCategory if M.partial else StrictMonoidalCategory
        base = opposite(M.base)
        return cls(base, M._tob, M._tmor, M.unit, name=base.name)  # type: ignore[arg-type]
    return OppositeMonoidal(M)


def _dualizable(cat: Category, what: str):
    if not cat.enumerable:
        raise PreconditionError(f"{what} {cat.name} is not enumerable and cannot be dualized")


def dualize_graded(gm: GradedMonadData) -> GradedComonadData:
    """
    A graded monad on C graded by M is a graded comonad on C^op graded by M^op.
    Every component keeps its value; only the ambient categories flip.
    """
    _dualizable(gm.base, "base")
    _dualizable(gm.grading, "grading")
    return GradedComonadData(
        opposite_monoidal(gm.grading),
        opposite(gm.base),
        gm.T_ob,
        gm.T_mor,
        gm.T_u,
        gm.eta,
        gm.mu,
        name=f"{gm.name}^op",
        objects=gm.objects,
        morphisms=gm.morphisms,
        meta=dict(gm.meta),
    )


def dualize_graded_comonad(gc: GradedComonadData) -> GradedMonadData:
    _dualizable(gc.base, "base")
    _dualizable(gc.grading, "grading")
    name = gc.name[:-3] if gc.name.endswith("^op") else f"{gc.name}^op"
    return GradedMonadData(
        opposite_monoidal(gc.grading),
        opposite(gc.base),
        gc.S_ob,
        gc.S_mor,
        gc.S_u,
        gc.eps,
        gc.delta,
        name=name,
        objects=gc.objects,
        morphisms=gc.morphisms,
        meta=dict(gc.meta),
    )


def graded_tables(gm, objects=None, morphisms=None) -> Dict[str, Dict[str, str]]:
    comonad = isinstance(gm, GradedComonadData)
    ob = gm.S_ob if comonad else gm.T_ob
    mor = gm.S_mor if comonad else gm.T_mor
    tu = gm.S_u if comonad else gm.T_u
    unit = gm.eps if comonad else gm.eta
    mult = gm.delta if comonad else gm.mu
    M, C = gm.grading, gm.base
    obs, mors = _samples(C, objects if objects is not None else gm.objects, morphisms if morphisms is not None else gm.morphisms)
    out: Dict[str, Dict[str, str]] = {"ob": {}, "mor": {}, "u": {}, "unit": {}, "mult": {}}

    def put(table, key, thunk):
        try:
            out[table][describe(key)] = describe(thunk())
        except OffGridError:
            pass

    for m in M.objects():
        for c in obs:
            put("ob", (m, c), lambda: ob(m, c))
        for f in mors:
            put("mor", (m, f), lambda: mor(m, f))
        for n in M.objects():
            for c in obs:
                put("mult", (m, n, c), lambda: mult(m, n, c))
    for u in M.morphisms():
        for c in obs:
            put("u", (u, c), lambda: tu(u, c))
    for c in obs:
        put("unit", c, lambda: unit(c))
    return out


# ---------- Strict actions, adjunctions, transport ----------


def check_strict_action(act: StrictActionData, objects=None, morphisms=None) -> LawReport:
    M, A = act.grading, act.carrier
    obs, mors = _samples(A, objects, morphisms)
    I = M.unit
    rep = LawReport(f"strict action {act.name}")
    for m in M.objects():
        for a in obs:
            rep.check("action identity", A, lambda m=m, a=a: (act.act_mor(M.identity(m), A.identity(a)), A.identity(act.act_ob(m, a))), m=m, object=a)
    for a in obs:
        rep.check("strict unit", VALUES, lambda a=a: (act.act_ob(I, a), a), object=a)
        for m in M.objects():
            for n in M.objects():
                rep.check(
                    "strict associativity",
                    VALUES,
                    lambda m=m, n=n, a=a: (act.act_ob(m, act.act_ob(n, a)), act.act_ob(M.tensor_ob(m, n), a)),
                    m=m, n=n, object=a,
                )
    for w in mors:
        rep.check("strict unit", A, lambda w=w: (act.act_mor(M.identity(I), w), w), morphism=w)
        for u in M.morphisms():
            for v in M.morphisms():
                rep.check(
                    "strict associativity",
                    A,
                    lambda u=u, v=v, w=w: (act.act_mor(u, act.act_mor(v, w)), act.act_mor(M.tensor_mor(u, v), w)),
                    u=u, v=v, morphism=w,
                )
    for g, f in _composable(A, mors):
        for u2, u in _composable(M, M.morphisms()):
            rep.check(
                "action composition",
                A,
                lambda g=g, f=f, u2=u2, u=u: (act.act_mor(M.compose(u2, u), A.compose(g, f)), A.compose(act.act_mor(u2, g), act.act_mor(u, f))),
                u=(u2, u), pair=(g, f),
            )
    return rep


def check_adjunction(adj: AdjunctionData, objects=None, carrier_objects=None) -> LawReport:
    l, r = adj.left, adj.right
    C, A = l.src, l.dst
    cobs = list(C.sample_objects() if objects is None else objects)
    aobs = list(A.sample_objects() if carrier_objects is None else carrier_objects)
    rep = LawReport(f"adjunction {adj.name}")
    for c in cobs:
        rep.check("typing unit", VALUES, lambda c=c: ((C.dom(adj.unit(c)), C.cod(adj.unit(c))), (c, r.ob(l.ob(c)))), object=c)
        rep.check(
            "triangle left",
            A,
            lambda c=c: (A.compose(adj.counit(l.ob(c)), l.mor(adj.unit(c))), A.identity(l.ob(c))),
            object=c,
        )
    for a in aobs:
        rep.check("typing counit", VALUES, lambda a=a: ((A.dom(adj.counit(a)), A.cod(adj.counit(a))), (l.ob(r.ob(a)), a)), object=a)
        rep.check(
            "triangle right",
            C,
            lambda a=a: (C.compose(r.mor(adj.counit(a)), adj.unit(r.ob(a))), C.identity(r.ob(a))),
            object=a,
        )
    return rep


def transport_lax_action(strict: StrictActionData, adj: AdjunctionData, objects=None, carrier_objects=None) -> LaxActionData:
    """
    The lax action r . |> . (M x l): m * c = r(m |> l c), eta = unit of the adjunction,
    mu_{m,n,c} = r(m |> counit_{n |> l c}).
    """
    tri = check_adjunction(adj, objects, carrier_objects)
    if not tri.passed:
        first = tri.first_failure()
        raise PreconditionError(f"adjunction {adj.name} fails {first.axiom if first else 'triangle'}", tri)
    l, r = adj.left, adj.right
    M = strict.grading

    def act_ob(m, c):
        return r.ob(strict.act_ob(m, l.ob(c)))

    def act_mor(u, f):
        return r.mor(strict.act_mor(u, l.mor(f)))

    def mu(m, n, c):
        return r.mor(strict.whisker(m, adj.counit(strict.act_ob(n, l.ob(c)))))

    out = LaxActionData(M, l.src, act_ob, act_mor, adj.unit, mu, name=f"transport({strict.name}, {adj.name})", objects=objects)
    log.info("transported %s along %s", strict.name, adj.name)
    return out


def compare_lax_actions(a: GradedMonadData, b: GradedMonadData, objects=None, morphisms=None) -> LawReport:
    M, C = a.grading, a.base
    obs, mors = _samples(C, objects if objects is not None else a.objects, morphisms if morphisms is not None else a.morphisms)
    rep = LawReport(f"{a.name} vs {b.name}")
    for m in M.objects():
        for c in obs:
            rep.check("T_ob", VALUES, lambda m=m, c=c: (a.T_ob(m, c), b.T_ob(m, c)), m=m, object=c)
        for f in mors:
            rep.check("T_mor", C, lambda m=m, f=f: (a.T_mor(m, f), b.T_mor(m, f)), m=m, morphism=f)
        for n in M.objects():
            for c in obs:
                rep.check("mu", C, lambda m=m, n=n, c=c: (a.mu(m, n, c), b.mu(m, n, c)), m=m, n=n, object=c)
    for u in M.morphisms():
        for c in obs:
            rep.check("T_u", C, lambda u=u, c=c: (a.T_u(u, c), b.T_u(u, c)), u=u, object=c)
    for c in obs:
        rep.check("eta", C, lambda c=c: (a.eta(c), b.eta(c)), object=c)
    return rep
