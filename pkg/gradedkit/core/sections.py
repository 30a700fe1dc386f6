"""
Sections of a projection p: E -> B and, for the EM category of an indexed monad,
the concrete description of its sections as families of algebras with
transition maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import prod
from typing import Any, Dict, List, Optional, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.em_indexed import EMIndexedCategory, IndexedEMMorphism, IndexedEMObject, em_indexed_projection, is_indexed_em_morphism
from gradedkit.core.errors import CompositionError, SizeBoundError
from gradedkit.core.fincat import Category, category_law_errors, tabulate
from gradedkit.core.functors import ComputedFunctor, Functor, FunctorTable, NatTransTable, enumerate_functors, validate_functor, validate_nat_trans
from gradedkit.core.indexed import IndexedMonadData, algebra_structures
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.search import Constraint, Variable, solve
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)


class SectionMorphism:
    def __init__(self, src: FunctorTable, dst: FunctorTable, components: Dict[Any, Any]):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def at(self, b: Any) -> Any:
        return self.components[b]

    def as_nat_trans(self) -> NatTransTable:
        return NatTransTable(self.src, self.dst, self.components, name=f"{self.src.name}=>{self.dst.name}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SectionMorphism) and self.src == other.src and self.dst == other.dst and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.src, self.dst, tuple(sorted((describe(k), describe(v)) for k, v in self.components.items()))))


class SectionCategoryData(Category):
    """Pi_B(p): sections s of p and vertical transformations between them."""

    def __init__(self, p: Functor, max_sections: Optional[int] = None):
        self.p = p
        E, B = p.src, p.dst
        self.name = f"Sect({p.name})"
        bound = max_sections if max_sections is not None else active_config().max_morphisms
        fibres = [sum(1 for x in E.objects() if p.ob(x) == b) for b in B.objects()]
        if prod(fibres) > bound:
            raise SizeBoundError(f"{self.name}: up to {prod(fibres)} sections, bound is {bound}")
        extra = [Constraint(f"over {describe(b)}", (("ob", b),), lambda a, b=b: p.ob(a[("ob", b)]) == b) for b in B.objects()]
        extra += [
            Constraint(f"over {describe(u)}", (("mor", u),), lambda a, u=u: B.equal(p.mor(a[("mor", u)]), u))
            for u in B.morphisms()
            if not B.is_identity(u)
        ]
        self._objects: List[FunctorTable] = []
        for i, s in enumerate(enumerate_functors(B, E, extra)):
            s.name = f"s{i}"
            self._objects.append(s)
        log.info("%s: %d sections", self.name, len(self._objects))

    def objects(self):
        return list(self._objects)

    def hom(self, s, t):
        E, B = self.p.src, self.p.dst
        obs = B.objects()
        variables = [
            Variable(b, (lambda a, b=b: [f for f in E.hom(s.ob(b), t.ob(b)) if B.is_identity(self.p.mor(f))]))
            for b in obs
        ]
        constraints = []
        for u in B.morphisms():
            x, y = B.dom(u), B.cod(u)
            constraints.append(
                Constraint(
                    f"naturality {describe(u)}",
                    tuple(dict.fromkeys((x, y))),
                    lambda a, u=u, x=x, y=y: E.equal(E.compose(t.mor(u), a[x]), E.compose(a[y], s.mor(u))),
                )
            )
        return [SectionMorphism(s, t, {b: sol[b] for b in obs}) for sol in solve(variables, constraints)]

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, s):
        E = self.p.src
        return SectionMorphism(s, s, {b: E.identity(s.ob(b)) for b in self.p.dst.objects()})

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose")
        E = self.p.src
        return SectionMorphism(f.src, g.dst, {b: E.compose(g.at(b), f.at(b)) for b in self.p.dst.objects()})

    def equal(self, f, g):
        E = self.p.src
        return f.src == g.src and f.dst == g.dst and all(E.equal(f.at(b), g.at(b)) for b in self.p.dst.objects())

    def label_object(self, s):
        return s.name

    def label_morphism(self, f):
        return f"{f.src.name}=>{f.dst.name}[{','.join(describe(v) for v in f.components.values())}]"


def sections_category(p: Functor, max_sections: Optional[int] = None) -> SectionCategoryData:
    return SectionCategoryData(p, max_sections)


def check_sections(sc: SectionCategoryData) -> LawReport:
    p = sc.p
    E, B = p.src, p.dst
    rep = LawReport(f"sections {sc.name}")
    for s in sc.objects():
        rep.absorb(validate_functor(s, B.objects(), B.morphisms()), prefix="section functor ", section=s.name)
        for b in B.objects():
            rep.check("section over identity", VALUES, lambda s=s, b=b: (p.ob(s.ob(b)), b), section=s.name, object=b)
        for u in B.morphisms():
            rep.check("section over identity", B, lambda s=s, u=u: (p.mor(s.mor(u)), u), section=s.name, morphism=u)
    for f in sc.morphisms():
        rep.absorb(validate_nat_trans(f.as_nat_trans(), B.objects(), B.morphisms()), prefix="section morphism ", transformation=sc.label_morphism(f))
        for b in B.objects():
            rep.check("vertical", B, lambda f=f, b=b: (p.mor(f.at(b)), B.identity(b)), transformation=sc.label_morphism(f), object=b)
    fc, _, _ = tabulate(sc)
    problems = category_law_errors(fc)
    for problem in problems:
        rep.fail("category laws", reason=problem)
    if not problems:
        rep.ok("category laws", objects=len(fc.objects()), morphisms=len(fc.morphisms()))
    return rep


# ---------- Families of algebras ----------


class AlgebraFamily:
    def __init__(self, algebras: Dict[Any, Tuple[Any, Any]], transitions: Dict[Any, Any]):
        self.algebras = dict(algebras)
        self.transitions = dict(transitions)

    def carrier(self, b: Any) -> Any:
        return self.algebras[b][0]

    def structure(self, b: Any) -> Any:
        return self.algebras[b][1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AlgebraFamily) and self.algebras == other.algebras and self.transitions == other.transitions

    def __hash__(self) -> int:
        return hash(
            (
                tuple(sorted((describe(k), describe(v)) for k, v in self.algebras.items())),
                tuple(sorted((describe(k), describe(v)) for k, v in self.transitions.items())),
            )
        )

    def label(self) -> str:
        algs = ",".join(f"{describe(b)}:{describe(ch)}" for b, (_, ch) in self.algebras.items())
        hs = ",".join(f"{describe(u)}:{describe(h)}" for u, h in self.transitions.items())
        return f"<{algs}|{hs}>"


class FamilyMorphism:
    def __init__(self, src: AlgebraFamily, dst: AlgebraFamily, components: Dict[Any, Any]):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def at(self, b: Any) -> Any:
        return self.components[b]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FamilyMorphism) and self.src == other.src and self.dst == other.dst and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.src, self.dst, tuple(sorted((describe(k), describe(v)) for k, v in self.components.items()))))


class FamilyCategory(Category):
    def __init__(self, im: IndexedMonadData, objects=None):
        self.im = im
        self.name = f"Fam({im.name})"
        B, C = im.index, im.base
        cobs = list(objects if objects is not None else (im.objects if im.objects is not None else C.sample_objects()))
        non_id = [u for u in B.morphisms() if not B.is_identity(u)]
        choices = {b: [(c, chi) for c in cobs for chi in sorted(algebra_structures(im.monad_at(b), c), key=C.sort_key)] for b in B.objects()}

        def h_of(a, u):
            if B.is_identity(u):
                return C.identity(a[("alg", B.dom(u))][0])
            return a[("h", u)]

        def needs(u):
            return (("alg", B.dom(u)),) if B.is_identity(u) else (("h", u),)

        variables = [Variable(("alg", b), (lambda a, b=b: choices[b])) for b in B.objects()]
        variables += [
            Variable(("h", u), (lambda a, u=u: C.hom(a[("alg", B.dom(u))][0], a[("alg", B.cod(u))][0])))
            for u in non_id
        ]
        constraints = []
        for u in non_id:
            b, b2 = B.dom(u), B.cod(u)
            constraints.append(
                Constraint(
                    f"transition {describe(u)}",
                    (("alg", b), ("alg", b2), ("h", u)),
                    lambda a, u=u, b=b, b2=b2: is_indexed_em_morphism(
                        im, IndexedEMObject(b, *a[("alg", b)]), IndexedEMObject(b2, *a[("alg", b2)]), u, a[("h", u)]
                    ),
                )
            )
        for u in non_id:
            for v in non_id:
                if B.cod(u) != B.dom(v):
                    continue
                vu = B.compose(v, u)
                constraints.append(
                    Constraint(
                        f"functoriality {describe(v)}.{describe(u)}",
                        tuple(dict.fromkeys(needs(u) + needs(v) + needs(vu))),
                        lambda a, u=u, v=v, vu=vu: C.equal(h_of(a, vu), C.compose(h_of(a, v), h_of(a, u))),
                    )
                )
        self._objects = [
            AlgebraFamily({b: sol[("alg", b)] for b in B.objects()}, {u: sol[("h", u)] for u in non_id})
            for sol in solve(variables, constraints)
        ]
        log.info("%s: %d families", self.name, len(self._objects))

    def transition(self, x: AlgebraFamily, u: Any) -> Any:
        B, C = self.im.index, self.im.base
        return C.identity(x.carrier(B.dom(u))) if B.is_identity(u) else x.transitions[u]

    def objects(self):
        return list(self._objects)

    def hom(self, x, y):
        B, C, im = self.im.index, self.im.base, self.im
        obs = B.objects()
        variables = [Variable(b, (lambda a, b=b: C.hom(x.carrier(b), y.carrier(b)))) for b in obs]
        constraints = [
            Constraint(
                f"algebra hom {describe(b)}",
                (b,),
                lambda a, b=b: C.equal(
                    C.compose(a[b], x.structure(b)),
                    C.compose(y.structure(b), im.T_mor(b, a[b])),
                ),
            )
            for b in obs
        ]
        for u in B.morphisms():
            b, b2 = B.dom(u), B.cod(u)
            constraints.append(
                Constraint(
                    f"naturality square {describe(u)}",
                    tuple(dict.fromkeys((b, b2))),
                    lambda a, u=u, b=b, b2=b2: C.equal(
                        C.compose(self.transition(y, u), a[b]), C.compose(a[b2], self.transition(x, u))
                    ),
                )
            )
        return [FamilyMorphism(x, y, {b: sol[b] for b in obs}) for sol in solve(variables, constraints)]

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, x):
        C = self.im.base
        return FamilyMorphism(x, x, {b: C.identity(x.carrier(b)) for b in self.im.index.objects()})

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose")
        C = self.im.base
        return FamilyMorphism(f.src, g.dst, {b: C.compose(g.at(b), f.at(b)) for b in self.im.index.objects()})

    def label_object(self, x):
        return x.label()

    def label_morphism(self, f):
        return f"{f.src.label()}->{f.dst.label()}"


@dataclass
class SectionsComparison:
    sections: SectionCategoryData
    families: FamilyCategory
    forward: Functor
    backward: Functor
    report: LawReport = field(default_factory=LawReport)

    @property
    def passed(self) -> bool:
        return self.report.passed


def sections_of_em_indexed(im: IndexedMonadData, em: Optional[EMIndexedCategory] = None) -> SectionsComparison:
    em = em or EMIndexedCategory(im)
    B, C = im.index, im.base
    sc = sections_category(em_indexed_projection(em))
    fam = FamilyCategory(im, em_carriers(em))

    def to_family(s: FunctorTable) -> AlgebraFamily:
        algebras = {b: (s.ob(b).carrier, s.ob(b).structure) for b in B.objects()}
        transitions = {u: s.mor(u).h for u in B.morphisms() if not B.is_identity(u)}
        return AlgebraFamily(algebras, transitions)

    def to_family_mor(psi: SectionMorphism) -> FamilyMorphism:
        return FamilyMorphism(to_family(psi.src), to_family(psi.dst), {b: psi.at(b).h for b in B.objects()})

    def to_section(x: AlgebraFamily) -> FunctorTable:
        obs = {b: IndexedEMObject(b, *x.algebras[b]) for b in B.objects()}
        mors = {u: IndexedEMMorphism(obs[B.dom(u)], obs[B.cod(u)], u, fam.transition(x, u)) for u in B.morphisms()}
        return FunctorTable(B, em, obs, mors, name="s")

    def to_section_mor(f: FamilyMorphism) -> SectionMorphism:
        s, t = to_section(f.src), to_section(f.dst)
        return SectionMorphism(s, t, {b: IndexedEMMorphism(s.ob(b), t.ob(b), B.identity(b), f.at(b)) for b in B.objects()})

    forward = ComputedFunctor(sc, fam, to_family, to_family_mor, name="families")
    backward = ComputedFunctor(fam, sc, to_section, to_section_mor, name="sections")

    rep = LawReport(f"sections of {em.name}")
    rep.merge(check_sections(sc))
    fc, _, _ = tabulate(fam)
    problems = category_law_errors(fc)
    for problem in problems:
        rep.fail("family category laws", reason=problem)
    if not problems:
        rep.ok("family category laws", objects=len(fc.objects()), morphisms=len(fc.morphisms()))

    s_obs, f_obs = sc.objects(), fam.objects()
    rep.check("object counts", VALUES, lambda: (len(s_obs), len(f_obs)))
    for s in s_obs:
        for t in s_obs:
            rep.check("hom counts", VALUES, lambda s=s, t=t: (len(sc.hom(s, t)), len(fam.hom(to_family(s), to_family(t)))), src=s.name, dst=t.name)
    s_mors, f_mors = sc.morphisms(), fam.morphisms()
    rep.merge(validate_functor(forward, s_obs, s_mors), prefix="forward ")
    rep.merge(validate_functor(backward, f_obs, f_mors), prefix="backward ")
    for s in s_obs:
        rep.check("round trip", VALUES, lambda s=s: (to_section(to_family(s)), s), section=s.name)
    for x in f_obs:
        rep.check("round trip", VALUES, lambda x=x: (to_family(to_section(x)), x), family=x.label())
    for psi in s_mors:
        rep.check("round trip", sc, lambda psi=psi: (to_section_mor(to_family_mor(psi)), psi), morphism=sc.label_morphism(psi))
    for f in f_mors:
        rep.check("round trip", fam, lambda f=f: (to_family_mor(to_section_mor(f)), f), morphism=fam.label_morphism(f))
    log.info("sections of %s: %d sections, %d families, %s", em.name, len(s_obs), len(f_obs), rep.counts())
    return SectionsComparison(sc, fam, forward, backward, rep)


def em_carriers(em: EMIndexedCategory) -> List[Any]:
    return list(dict.fromkeys(x.carrier for x in em.objects()))
