from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from gradedkit.core.errors import CompositionError, PreconditionError, TypingError
from gradedkit.core.fincat import Category, opposite
from gradedkit.core.functors import FunctorTable
from gradedkit.core.graded import GradedMonadData, ProgressFn, _composable, _lookup, _Progress, _samples
from gradedkit.core.monoidal import MonoidalCategory
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)


@dataclass
class MonadData:
    base: Category
    T_ob: Callable[[Any], Any]
    T_mor: Callable[[Any], Any]
    eta: Callable[[Any], Any]
    mu: Callable[[Any], Any]
    name: str = "T"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None

    @classmethod
    def from_tables(cls, base, T_ob, T_mor, eta, mu, name="T") -> "MonadData":
        return cls(base, _lookup(T_ob, "T_ob"), _lookup(T_mor, "T_mor"), _lookup(eta, "eta"), _lookup(mu, "mu"), name=name)


def check_monad(t: MonadData, objects=None, morphisms=None) -> LawReport:
    C = t.base
    obs, mors = _samples(C, objects if objects is not None else t.objects, morphisms if morphisms is not None else t.morphisms)
    rep = LawReport(f"monad {t.name}")
    for c in obs:
        rep.check("typing eta", VALUES, lambda c=c: ((C.dom(t.eta(c)), C.cod(t.eta(c))), (c, t.T_ob(c))), object=c)
        rep.check("typing mu", VALUES, lambda c=c: ((C.dom(t.mu(c)), C.cod(t.mu(c))), (t.T_ob(t.T_ob(c)), t.T_ob(c))), object=c)
    if not rep.passed:
        return rep
    for c in obs:
        rep.check("T-functor", C, lambda c=c: (t.T_mor(C.identity(c)), C.identity(t.T_ob(c))), object=c)
    for g, f in _composable(C, mors):
        rep.check("T-functor", C, lambda g=g, f=f: (t.T_mor(C.compose(g, f)), C.compose(t.T_mor(g), t.T_mor(f))), pair=(g, f))
    for f in mors:
        a, b = C.dom(f), C.cod(f)
        rep.check("eta-natural", C, lambda f=f, a=a, b=b: (C.compose(t.T_mor(f), t.eta(a)), C.compose(t.eta(b), f)), morphism=f)
        rep.check("mu-natural", C, lambda f=f, a=a, b=b: (C.compose(t.T_mor(f), t.mu(a)), C.compose(t.mu(b), t.T_mor(t.T_mor(f)))), morphism=f)
    for c in obs:
        Tc = t.T_ob(c)
        rep.check("left unit", C, lambda c=c, Tc=Tc: (C.compose(t.mu(c), t.eta(Tc)), C.identity(Tc)), object=c)
        rep.check("right unit", C, lambda c=c, Tc=Tc: (C.compose(t.mu(c), t.T_mor(t.eta(c))), C.identity(Tc)), object=c)
        rep.check("associativity", C, lambda c=c, Tc=Tc: (C.compose(t.mu(c), t.mu(Tc)), C.compose(t.mu(c), t.T_mor(t.mu(c)))), object=c)
    return rep


@dataclass
class MonadMorphism:
    """tau_c: T' c -> T c from `target` (T') to `source` (T) as functors; EM maps T-algebras to T'-algebras."""

    source: MonadData
    target: MonadData
    tau: Callable[[Any], Any]
    name: str = "tau"


def _check_direction(mm: MonadMorphism, obs) -> None:
    C = mm.source.base
    for c in obs:
        t = mm.tau(c)
        if C.dom(t) != mm.target.T_ob(c) or C.cod(t) != mm.source.T_ob(c):
            raise TypingError(
                f"{mm.name} at {describe(c)} has type {describe(C.dom(t))} -> {describe(C.cod(t))}, "
                f"expected {describe(mm.target.T_ob(c))} -> {describe(mm.source.T_ob(c))}"
            )


def check_monad_morphism(mm: MonadMorphism, objects=None, morphisms=None) -> LawReport:
    T, T2 = mm.source, mm.target
    C = T.base
    obs, mors = _samples(C, objects if objects is not None else T.objects, morphisms if morphisms is not None else T.morphisms)
    _check_direction(mm, obs)
    rep = LawReport(f"monad morphism {mm.name}")
    for f in mors:
        a, b = C.dom(f), C.cod(f)
        rep.check("naturality", C, lambda f=f, a=a, b=b: (C.compose(T.T_mor(f), mm.tau(a)), C.compose(mm.tau(b), T2.T_mor(f))), morphism=f)
    for c in obs:
        rep.check("unit square", C, lambda c=c: (C.compose(mm.tau(c), T2.eta(c)), T.eta(c)), object=c)
        rep.check(
            "multiplication square",
            C,
            lambda c=c: (C.compose(mm.tau(c), T2.mu(c)), C.compose_all(T.mu(c), mm.tau(T.T_ob(c)), T2.T_mor(mm.tau(c)))),
            object=c,
        )
    return rep


def identity_monad_morphism(t: MonadData) -> MonadMorphism:
    return MonadMorphism(t, t, lambda c: t.base.identity(t.T_ob(c)), name=f"id_{t.name}")


def compose_monad_morphisms(second: MonadMorphism, first: MonadMorphism) -> MonadMorphism:
    C = first.source.base
    return MonadMorphism(first.source, second.target, lambda c: C.compose(first.tau(c), second.tau(c)), name=f"{first.name}.{second.name}")


# ---------- Eilenberg-Moore category of an ordinary monad ----------


@dataclass(frozen=True)
class Algebra:
    carrier: Any
    structure: Any

    def label(self) -> str:
        return f"({describe(self.carrier)}|{describe(self.structure)})"


@dataclass(frozen=True)
class AlgebraHom:
    src: Algebra
    dst: Algebra
    map: Any

    def label(self) -> str:
        return f"{self.src.label()}->{self.dst.label()}[{describe(self.map)}]"


def is_algebra(t: MonadData, c: Any, chi: Any) -> bool:
    C = t.base
    return C.equal(C.compose(chi, t.eta(c)), C.identity(c)) and C.equal(
        C.compose(chi, t.T_mor(chi)), C.compose(chi, t.mu(c))
    )


def algebra_structures(t: MonadData, c: Any) -> List[Any]:
    C = t.base
    return [chi for chi in C.hom(t.T_ob(c), c) if is_algebra(t, c, chi)]


def is_algebra_hom(t: MonadData, a: Algebra, b: Algebra, h: Any) -> bool:
    C = t.base
    return C.equal(C.compose(h, a.structure), C.compose(b.structure, t.T_mor(h)))


class EMCategory(Category):
    def __init__(self, t: MonadData, objects=None):
        self.monad = t
        self.name = f"EM({t.name})"
        C = t.base
        obs = list(C.sample_objects() if objects is None else objects)
        self._objects = [Algebra(c, chi) for c in obs for chi in sorted(algebra_structures(t, c), key=C.sort_key)]
        log.info("%s: %d algebras", self.name, len(self._objects))

    def objects(self):
        return list(self._objects)

    def hom(self, a, b):
        C = self.monad.base
        return [AlgebraHom(a, b, h) for h in sorted(C.hom(a.carrier, b.carrier), key=C.sort_key) if is_algebra_hom(self.monad, a, b, h)]

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, a):
        return AlgebraHom(a, a, self.monad.base.identity(a.carrier))

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose {g.label()} after {f.label()}")
        return AlgebraHom(f.src, g.dst, self.monad.base.compose(g.map, f.map))

    def equal(self, f, g):
        return f.src == g.src and f.dst == g.dst and self.monad.base.equal(f.map, g.map)

    def sort_key(self, f):
        return (f.src.label(), f.dst.label(), self.monad.base.sort_key(f.map))


def em_category(t: MonadData, objects=None) -> EMCategory:
    return EMCategory(t, objects)


def em_on_monad_morphism(mm: MonadMorphism, objects=None) -> FunctorTable:
    C = mm.source.base
    src = EMCategory(mm.source, objects)
    dst = EMCategory(mm.target, objects)
    _check_direction(mm, [a.carrier for a in src.objects()])
    ob_map = {a: Algebra(a.carrier, C.compose(a.structure, mm.tau(a.carrier))) for a in src.objects()}
    for a, b in ob_map.items():
        if not is_algebra(mm.target, b.carrier, b.structure):
            raise PreconditionError(f"{mm.name} sends {a.label()} to a non-algebra")
    mor_map = {f: AlgebraHom(ob_map[f.src], ob_map[f.dst], f.map) for f in src.morphisms()}
    return FunctorTable(src, dst, ob_map, mor_map, name=f"EM({mm.name})")


# ---------- Indexed monads and comonads ----------


@dataclass
class IndexedMonadData:
    index: Category
    base: Category
    T_ob: Callable[[Any, Any], Any]
    T_mor: Callable[[Any, Any], Any]
    T_u: Callable[[Any, Any], Any]
    eta: Callable[[Any, Any], Any]
    mu: Callable[[Any, Any], Any]
    name: str = "T"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tables(cls, index, base, T_ob, T_mor, T_u, eta, mu, name="T") -> "IndexedMonadData":
        return cls(index, base, _lookup(T_ob, "T_b"), _lookup(T_mor, "T_b"), _lookup(T_u, "T_u"), _lookup(eta, "eta_b"), _lookup(mu, "mu_b"), name=name)

    def monad_at(self, b: Any) -> MonadData:
        return MonadData(
            self.base,
            lambda c: self.T_ob(b, c),
            lambda f: self.T_mor(b, f),
            lambda c: self.eta(b, c),
            lambda c: self.mu(b, c),
            name=f"{self.name}_{describe(b)}",
            objects=self.objects,
            morphisms=self.morphisms,
        )

    def morphism_at(self, u: Any) -> MonadMorphism:
        """T_u as a monad morphism T_b' <= T_b in the Street direction."""
        B = self.index
        return MonadMorphism(self.monad_at(B.cod(u)), self.monad_at(B.dom(u)), lambda c: self.T_u(u, c), name=f"{self.name}_{describe(u)}")


@dataclass
class IndexedComonadData:
    index: Category
    base: Category
    S_ob: Callable[[Any, Any], Any]
    S_mor: Callable[[Any, Any], Any]
    S_u: Callable[[Any, Any], Any]
    eps: Callable[[Any, Any], Any]
    delta: Callable[[Any, Any], Any]
    name: str = "S"
    objects: Optional[List[Any]] = None
    morphisms: Optional[List[Any]] = None
    meta: Dict[str, Any] = field(default_factory=dict)


def check_indexed_monad(im: IndexedMonadData, objects=None, morphisms=None, on_progress: ProgressFn = None) -> LawReport:
    B, C = im.index, im.base
    obs, mors = _samples(C, objects if objects is not None else im.objects, morphisms if morphisms is not None else im.morphisms)
    bobs, bmors = B.objects(), B.morphisms()
    rep = LawReport(f"indexed monad {im.name}")
    prog = _Progress(on_progress, 7)

    for b in bobs:
        for c in obs:
            rep.check("typing eta", VALUES, lambda b=b, c=c: ((C.dom(im.eta(b, c)), C.cod(im.eta(b, c))), (c, im.T_ob(b, c))), b=b, object=c)
            rep.check(
                "typing mu",
                VALUES,
                lambda b=b, c=c: ((C.dom(im.mu(b, c)), C.cod(im.mu(b, c))), (im.T_ob(b, im.T_ob(b, c)), im.T_ob(b, c))),
                b=b, object=c,
            )
    for u in bmors:
        for c in obs:
            rep.check(
                "typing T_u",
                VALUES,
                lambda u=u, c=c: ((C.dom(im.T_u(u, c)), C.cod(im.T_u(u, c))), (im.T_ob(B.dom(u), c), im.T_ob(B.cod(u), c))),
                u=u, object=c,
            )
    prog.step()
    if not rep.passed:
        return rep

    for b in bobs:
        sub = check_monad(im.monad_at(b), obs, mors)
        kept = [e for e in sub.entries if e.axiom in ("T-functor", "eta-natural", "mu-natural")]
        rep.absorb(LawReport(sub.subject, kept), b=b)
    for u in bmors:
        for f in mors:
            a, a2 = C.dom(f), C.cod(f)
            rep.check(
                "T-natural",
                C,
                lambda u=u, f=f, a=a, a2=a2: (
                    C.compose(im.T_mor(B.cod(u), f), im.T_u(u, a)),
                    C.compose(im.T_u(u, a2), im.T_mor(B.dom(u), f)),
                ),
                u=u, morphism=f,
            )
    prog.step()

    for b in bobs:
        for c in obs:
            rep.check("IM1", C, lambda b=b, c=c: (im.T_u(B.identity(b), c), C.identity(im.T_ob(b, c))), b=b, object=c)
    prog.step()
    for u2, u in _composable(B, bmors):
        for c in obs:
            rep.check("IM2", C, lambda u2=u2, u=u, c=c: (C.compose(im.T_u(u2, c), im.T_u(u, c)), im.T_u(B.compose(u2, u), c)), u=u, u2=u2, object=c)
    prog.step()
    for u in bmors:
        b, b2 = B.dom(u), B.cod(u)
        for c in obs:
            rep.check("IM3", C, lambda u=u, b=b, b2=b2, c=c: (C.compose(im.T_u(u, c), im.eta(b, c)), im.eta(b2, c)), u=u, object=c)
            rep.check(
                "IM4",
                C,
                lambda u=u, b=b, b2=b2, c=c: (
                    C.compose(im.T_u(u, c), im.mu(b, c)),
                    C.compose(im.mu(b2, c), indexed_star(im, u, u, c)),
                ),
                u=u, object=c,
            )
    prog.step()
    for b in bobs:
        for c in obs:
            Tc = im.T_ob(b, c)
            rep.check("IM5", C, lambda b=b, c=c, Tc=Tc: (C.compose(im.mu(b, c), im.eta(b, Tc)), C.identity(Tc)), b=b, object=c)
            rep.check("IM6", C, lambda b=b, c=c, Tc=Tc: (C.compose(im.mu(b, c), im.T_mor(b, im.eta(b, c))), C.identity(Tc)), b=b, object=c)
            rep.check(
                "IM7",
                C,
                lambda b=b, c=c, Tc=Tc: (C.compose(im.mu(b, c), im.mu(b, Tc)), C.compose(im.mu(b, c), im.T_mor(b, im.mu(b, c)))),
                b=b, object=c,
            )
    prog.step()
    prog.finish()
    log.info("checked indexed monad %s: %s", im.name, rep.counts())
    return rep


def indexed_star(im: IndexedMonadData, u: Any, v: Any, c: Any) -> Any:
    B, C = im.index, im.base
    return C.compose(im.T_u(u, im.T_ob(B.cod(v), c)), im.T_mor(B.dom(u), im.T_u(v, c)))


def check_indexed_comonad(ic: IndexedComonadData, objects=None, morphisms=None, on_progress: ProgressFn = None) -> LawReport:
    B, C = ic.index, ic.base
    obs, mors = _samples(C, objects if objects is not None else ic.objects, morphisms if morphisms is not None else ic.morphisms)
    bobs, bmors = B.objects(), B.morphisms()
    rep = LawReport(f"indexed comonad {ic.name}")
    prog = _Progress(on_progress, 4)

    for b in bobs:
        for c in obs:
            rep.check("typing eps", VALUES, lambda b=b, c=c: ((C.dom(ic.eps(b, c)), C.cod(ic.eps(b, c))), (ic.S_ob(b, c), c)), b=b, object=c)
            rep.check(
                "typing delta",
                VALUES,
                lambda b=b, c=c: ((C.dom(ic.delta(b, c)), C.cod(ic.delta(b, c))), (ic.S_ob(b, c), ic.S_ob(b, ic.S_ob(b, c)))),
                b=b, object=c,
            )
    for u in bmors:
        for c in obs:
            rep.check(
                "typing S_u",
                VALUES,
                lambda u=u, c=c: ((C.dom(ic.S_u(u, c)), C.cod(ic.S_u(u, c))), (ic.S_ob(B.dom(u), c), ic.S_ob(B.cod(u), c))),
                u=u, object=c,
            )
    prog.step()
    if not rep.passed:
        return rep

    for b in bobs:
        for c in obs:
            rep.check("S-functor", C, lambda b=b, c=c: (ic.S_mor(b, C.identity(c)), C.identity(ic.S_ob(b, c))), b=b, object=c)
        for g, f in _composable(C, mors):
            rep.check("S-functor", C, lambda b=b, g=g, f=f: (ic.S_mor(b, C.compose(g, f)), C.compose(ic.S_mor(b, g), ic.S_mor(b, f))), b=b, pair=(g, f))
        for f in mors:
            a, a2 = C.dom(f), C.cod(f)
            rep.check("eps-natural", C, lambda b=b, f=f, a=a, a2=a2: (C.compose(f, ic.eps(b, a)), C.compose(ic.eps(b, a2), ic.S_mor(b, f))), b=b, morphism=f)
            rep.check(
                "delta-natural",
                C,
                lambda b=b, f=f, a=a, a2=a2: (C.compose(ic.S_mor(b, ic.S_mor(b, f)), ic.delta(b, a)), C.compose(ic.delta(b, a2), ic.S_mor(b, f))),
                b=b, morphism=f,
            )
    for u in bmors:
        for f in mors:
            a, a2 = C.dom(f), C.cod(f)
            rep.check(
                "S-natural",
                C,
                lambda u=u, f=f, a=a, a2=a2: (C.compose(ic.S_mor(B.cod(u), f), ic.S_u(u, a)), C.compose(ic.S_u(u, a2), ic.S_mor(B.dom(u), f))),
                u=u, morphism=f,
            )
    prog.step()

    for b in bobs:
        for c in obs:
            rep.check("IC1", C, lambda b=b, c=c: (ic.S_u(B.identity(b), c), C.identity(ic.S_ob(b, c))), b=b, object=c)
    for u2, u in _composable(B, bmors):
        for c in obs:
            rep.check("IC2", C, lambda u2=u2, u=u, c=c: (C.compose(ic.S_u(u2, c), ic.S_u(u, c)), ic.S_u(B.compose(u2, u), c)), u=u, u2=u2, object=c)

    def s_star(u, c):
        b, b2 = B.dom(u), B.cod(u)
        return C.compose(ic.S_u(u, ic.S_ob(b2, c)), ic.S_mor(b, ic.S_u(u, c)))

    for u in bmors:
        b, b2 = B.dom(u), B.cod(u)
        for c in obs:
            rep.check("IC3", C, lambda u=u, b=b, b2=b2, c=c: (C.compose(ic.eps(b2, c), ic.S_u(u, c)), ic.eps(b, c)), u=u, object=c)
            rep.check(
                "IC4",
                C,
                lambda u=u, b=b, b2=b2, c=c: (C.compose(ic.delta(b2, c), ic.S_u(u, c)), C.compose(s_star(u, c), ic.delta(b, c))),
                u=u, object=c,
            )
    prog.step()
    for b in bobs:
        for c in obs:
            Sc = ic.S_ob(b, c)
            rep.check("IC5", C, lambda b=b, c=c, Sc=Sc: (C.compose(ic.eps(b, Sc), ic.delta(b, c)), C.identity(Sc)), b=b, object=c)
            rep.check("IC6", C, lambda b=b, c=c, Sc=Sc: (C.compose(ic.S_mor(b, ic.eps(b, c)), ic.delta(b, c)), C.identity(Sc)), b=b, object=c)
            rep.check(
                "IC7",
                C,
                lambda b=b, c=c, Sc=Sc: (C.compose(ic.delta(b, Sc), ic.delta(b, c)), C.compose(ic.S_mor(b, ic.delta(b, c)), ic.delta(b, c))),
                b=b, object=c,
            )
    prog.step()
    prog.finish()
    log.info("checked indexed comonad %s: %s", ic.name, rep.counts())
    return rep


def dualize_indexed_comonad(ic: IndexedComonadData) -> IndexedMonadData:
    name = ic.name[:-3] if ic.name.endswith("^op") else f"{ic.name}^op"
    return IndexedMonadData(
        opposite(ic.index), opposite(ic.base), ic.S_ob, ic.S_mor, ic.S_u, ic.eps, ic.delta,
        name=name, objects=ic.objects, morphisms=ic.morphisms, meta=dict(ic.meta),
    )


def dualize_indexed_monad(im: IndexedMonadData) -> IndexedComonadData:
    name = im.name[:-3] if im.name.endswith("^op") else f"{im.name}^op"
    return IndexedComonadData(
        opposite(im.index), opposite(im.base), im.T_ob, im.T_mor, im.T_u, im.eta, im.mu,
        name=name, objects=im.objects, morphisms=im.morphisms, meta=dict(im.meta),
    )


# ---------- From indexed to graded ----------


def initial_morphisms(M: Category, unit: Any) -> Dict[Any, Any]:
    out = {}
    for n in M.objects():
        hs = M.hom(unit, n)
        if len(hs) != 1:
            rep = LawReport(f"initiality of {describe(unit)}")
            rep.fail("initial unit", object=n, morphisms=len(hs))
            raise PreconditionError(f"unit {describe(unit)} is not initial: hom({describe(unit)}, {describe(n)}) has {len(hs)} morphisms", rep)
        out[n] = hs[0]
    return out


def graded_from_indexed(im: IndexedMonadData, M: MonoidalCategory) -> GradedMonadData:
    """
    T_m := im.T_m, eta := eta_I and mu_{m,n} := mu_{m(x)n} . (T_inl * T_inr) with
    inl = id_m (x) !_n and inr = !_m (x) id_n.
    """
    B = im.index
    if set(B.objects()) != set(M.objects()) or set(B.morphisms()) != set(M.morphisms()):
        raise PreconditionError(f"grading {M.name} does not share its category with index {B.name}")
    I = M.unit
    bang = initial_morphisms(M, I)
    C = im.base

    def inl(m, n):
        return M.tensor_mor(M.identity(m), bang[n])

    def inr(m, n):
        return M.tensor_mor(bang[m], M.identity(n))

    def mu(m, n, c):
        mn = M.tensor_ob(m, n)
        l, r = inl(m, n), inr(m, n)
        mixed = C.compose(im.T_u(l, im.T_ob(mn, c)), im.T_mor(m, im.T_u(r, c)))
        return C.compose(im.mu(mn, c), mixed)

    log.info("graded monad induced by %s over %s", im.name, M.name)
    return GradedMonadData(
        M, C, im.T_ob, im.T_mor, im.T_u, lambda c: im.eta(I, c), mu,
        name=f"g({im.name})", objects=im.objects, morphisms=im.morphisms,
    )
