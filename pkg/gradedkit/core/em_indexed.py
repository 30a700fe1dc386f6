from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, List, Optional

from gradedkit.core.errors import CompositionError
from gradedkit.core.fincat import Category, ProductCategory, category_law_errors, tabulate
from gradedkit.core.functors import ComputedFunctor, Functor, validate_functor
from gradedkit.core.graded import AdjunctionData, check_adjunction
from gradedkit.core.indexed import IndexedMonadData, algebra_structures, is_algebra
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexedEMObject:
    index: Any
    carrier: Any
    structure: Any

    def label(self) -> str:
        return f"({describe(self.index)};{describe(self.carrier)}|{describe(self.structure)})"


@dataclass(frozen=True)
class IndexedEMMorphism:
    src: IndexedEMObject
    dst: IndexedEMObject
    u: Any
    h: Any

    def label(self) -> str:
        return f"({describe(self.u)},{describe(self.h)})"


def is_indexed_em_morphism(im: IndexedMonadData, x: IndexedEMObject, y: IndexedEMObject, u: Any, h: Any) -> bool:
    """h . chi = chi' . T_u,c' . T_b(h)"""
    C = im.base
    lhs = C.compose(h, x.structure)
    rhs = C.compose_all(y.structure, im.T_u(u, y.carrier), im.T_mor(x.index, h))
    return C.equal(lhs, rhs)


class EMIndexedCategory(Category):
    def __init__(self, im: IndexedMonadData, objects=None):
        self.im = im
        self.name = f"EM({im.name})"
        B, C = im.index, im.base
        cobs = list(objects if objects is not None else (im.objects if im.objects is not None else C.sample_objects()))
        self._objects: List[IndexedEMObject] = []
        for b in B.objects():
            t = im.monad_at(b)
            for c in cobs:
                for chi in sorted(algebra_structures(t, c), key=C.sort_key):
                    self._objects.append(IndexedEMObject(b, c, chi))
        log.info("%s: %d objects over %d indices", self.name, len(self._objects), len(B.objects()))

    def objects(self):
        return list(self._objects)

    def hom(self, x, y):
        B, C = self.im.index, self.im.base
        out = []
        for u in B.hom(x.index, y.index):
            for h in sorted(C.hom(x.carrier, y.carrier), key=C.sort_key):
                if is_indexed_em_morphism(self.im, x, y, u, h):
                    out.append(IndexedEMMorphism(x, y, u, h))
        return out

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, x):
        B, C = self.im.index, self.im.base
        return IndexedEMMorphism(x, x, B.identity(x.index), C.identity(x.carrier))

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose {g.label()} after {f.label()}")
        B, C = self.im.index, self.im.base
        return IndexedEMMorphism(f.src, g.dst, B.compose(g.u, f.u), C.compose(g.h, f.h))

    def equal(self, f, g):
        B, C = self.im.index, self.im.base
        return f.src == g.src and f.dst == g.dst and B.equal(f.u, g.u) and C.equal(f.h, g.h)

    def witness(self, f, g):
        if not self.im.index.equal(f.u, g.u):
            return f"over {describe(f.u)} vs {describe(g.u)}"
        return self.im.base.witness(f.h, g.h)

    def sort_key(self, f):
        B, C = self.im.index, self.im.base
        return (f.src.label(), f.dst.label(), describe(B.sort_key(f.u)), describe(C.sort_key(f.h)))

    def label_object(self, x):
        return x.label()

    def label_morphism(self, f):
        return f"{f.src.label()}->{f.dst.label()}{f.label()}"

    def over(self, b: Any) -> List[IndexedEMObject]:
        return [x for x in self._objects if x.index == b]


def em_indexed_build(im: IndexedMonadData, objects=None) -> EMIndexedCategory:
    em = EMIndexedCategory(im, objects)
    total = 0
    for x in em.objects():
        for y in em.objects():
            total += len(em.hom(x, y))
    log.info("%s: %d objects, %d morphisms", em.name, len(em.objects()), total)
    return em


def em_indexed_projection(em: EMIndexedCategory) -> Functor:
    return ComputedFunctor(em, em.im.index, lambda x: x.index, lambda f: f.u, name="pi0")


def reindex(im: IndexedMonadData, u: Any, y: IndexedEMObject) -> IndexedEMMorphism:
    """The cartesian lift of u: b -> b' at y: (b, chi' . T_u) -> y over u with carrier map id."""
    C = im.base
    x = IndexedEMObject(im.index.dom(u), y.carrier, C.compose(y.structure, im.T_u(u, y.carrier)))
    return IndexedEMMorphism(x, y, u, C.identity(y.carrier))


# ---------- Fibrations ----------


def is_cartesian(E: Category, p: Functor, f: Any) -> bool:
    B = p.dst
    x, y = E.dom(f), E.cod(f)
    pf = p.mor(f)
    for z in E.objects():
        for g in E.hom(z, y):
            for w in B.hom(p.ob(z), p.ob(x)):
                if not B.equal(B.compose(pf, w), p.mor(g)):
                    continue
                ks = [k for k in E.hom(z, x) if B.equal(p.mor(k), w) and E.equal(E.compose(f, k), g)]
                if len(ks) != 1:
                    return False
    return True


def check_fibration(E: Category, p: Functor, axiom: str = "cartesian lift") -> LawReport:
    B = p.dst
    rep = LawReport(f"fibration {p.name}")
    obs = E.objects()
    for u in B.morphisms():
        for y in obs:
            if p.ob(y) != B.cod(u):
                continue
            found = None
            for x in obs:
                if p.ob(x) != B.dom(u):
                    continue
                for f in E.hom(x, y):
                    if B.equal(p.mor(f), u) and is_cartesian(E, p, f):
                        found = f
                        break
                if found is not None:
                    break
            rep.check_true(axiom, found is not None, u=u, object=y)
    return rep


# ---------- Adjunction ----------


@dataclass
class EMIndexedAdjunction:
    im: IndexedMonadData
    category: EMIndexedCategory

    @property
    def base(self) -> ProductCategory:
        return ProductCategory(self.im.index, self.im.base)

    def free(self, bc: Any) -> IndexedEMObject:
        b, c = bc
        return IndexedEMObject(b, self.im.T_ob(b, c), self.im.mu(b, c))

    def free_mor(self, uf: Any) -> IndexedEMMorphism:
        u, f = uf
        im, B, C = self.im, self.im.index, self.im.base
        b = B.dom(u)
        c, c2 = C.dom(f), C.cod(f)
        h = C.compose(im.T_u(u, c2), im.T_mor(b, f))
        return IndexedEMMorphism(self.free((b, c)), self.free((B.cod(u), c2)), u, h)

    def forget(self, x: IndexedEMObject) -> Any:
        return (x.index, x.carrier)

    def forget_mor(self, f: IndexedEMMorphism) -> Any:
        return (f.u, f.h)

    def unit(self, bc: Any) -> Any:
        b, c = bc
        return (self.im.index.identity(b), self.im.eta(b, c))

    def counit(self, x: IndexedEMObject) -> IndexedEMMorphism:
        """(id_b, chi): (b, mu_b) -> (b, chi)"""
        return IndexedEMMorphism(self.free(self.forget(x)), x, self.im.index.identity(x.index), x.structure)

    def as_adjunction(self) -> AdjunctionData:
        base = self.base
        left = ComputedFunctor(base, self.category, self.free, self.free_mor, name="f^T")
        right = ComputedFunctor(self.category, base, self.forget, self.forget_mor, name="u^T")
        return AdjunctionData(left, right, self.unit, self.counit, name=f"f^T-|u^T({self.im.name})")


def em_indexed_adjunction(im: IndexedMonadData, category: Optional[EMIndexedCategory] = None) -> EMIndexedAdjunction:
    return EMIndexedAdjunction(im, category or EMIndexedCategory(im))


def check_em_indexed(em: EMIndexedCategory, fibration: bool = True) -> LawReport:
    im = em.im
    B, C = im.index, im.base
    rep = LawReport(f"EM indexed {em.name}")
    fc, _, _ = tabulate(em)
    problems = category_law_errors(fc)
    for problem in problems:
        rep.fail("category laws", reason=problem)
    if not problems:
        rep.ok("category laws", objects=len(fc.objects()), morphisms=len(fc.morphisms()))

    p = em_indexed_projection(em)
    rep.merge(validate_functor(p, em.objects(), em.morphisms()), prefix="projection ")
    if fibration:
        rep.merge(check_fibration(em, p))

    adj = em_indexed_adjunction(im, em)
    cobs = list(im.objects if im.objects is not None else C.sample_objects())
    base_obs = [(b, c) for b in B.objects() for c in cobs]
    for b, c in base_obs:
        rep.check("resolution identity", VALUES, lambda b=b, c=c: (adj.forget(adj.free((b, c))), (b, im.T_ob(b, c))), b=b, object=c)
        rep.check(
            "resolution identity",
            C,
            lambda b=b, c=c: (adj.counit(adj.free((b, c))).h, im.mu(b, c)),
            b=b, object=c,
        )
    for u in B.morphisms():
        for c in cobs:
            rep.check("resolution identity", C, lambda u=u, c=c: (adj.free_mor((u, C.identity(c))).h, im.T_u(u, c)), u=u, object=c)
    for b, c in base_obs:
        x = adj.free((b, c))
        rep.check_true("free algebra", is_algebra(im.monad_at(b), x.carrier, x.structure), b=b, object=c)
    rep.merge(check_adjunction(adj.as_adjunction(), base_obs, em.objects()))
    log.info("checked %s: %s", em.name, rep.counts())
    return rep
