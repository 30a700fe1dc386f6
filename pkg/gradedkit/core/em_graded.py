from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import CompositionError, PreconditionError, SizeBoundError, TypingError
from gradedkit.core.fincat import Category
from gradedkit.core.functors import ComputedFunctor, FunctorTable, enumerate_functors, validate_functor
from gradedkit.core.graded import AdjunctionData, GradedMonadData, StrictActionData, check_adjunction
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.search import Constraint, Variable, solve
from gradedkit.core.utils import describe, stable_hash

log = logging.getLogger(__name__)


class GradedAlgebra:
    def __init__(self, carrier: FunctorTable, structure: Dict[Tuple[Any, Any], Any], name: str = ""):
        self.carrier = carrier
        self.structure = dict(structure)
        self.name = name
        self._hash: Optional[int] = None

    def ob(self, n: Any) -> Any:
        return self.carrier.ob(n)

    def mor(self, u: Any) -> Any:
        return self.carrier.mor(u)

    def h(self, m: Any, n: Any) -> Any:
        try:
            return self.structure[(m, n)]
        except KeyError:
            raise TypingError(f"algebra {self.label()} has no structure map at ({describe(m)}, {describe(n)})") from None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, GradedAlgebra) and self.carrier == other.carrier and self.structure == other.structure

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.carrier, tuple(sorted((describe(k), describe(v)) for k, v in self.structure.items()))))
        return self._hash

    def label(self) -> str:
        if self.name:
            return self.name
        body = ",".join(f"{describe(n)}:{describe(c)}" for n, c in self.carrier.ob_map.items())
        digest = stable_hash([[describe(k), describe(v)] for k, v in sorted(self.structure.items(), key=lambda kv: describe(kv[0]))])
        return f"<{body}|{digest[:6]}>"

    def __repr__(self) -> str:
        return f"GradedAlgebra({self.label()})"


class GradedAlgebraHom:
    def __init__(self, src: GradedAlgebra, dst: GradedAlgebra, components: Dict[Any, Any]):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def at(self, n: Any) -> Any:
        try:
            return self.components[n]
        except KeyError:
            raise TypingError(f"homomorphism has no component at {describe(n)}") from None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GradedAlgebraHom)
            and self.src == other.src
            and self.dst == other.dst
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash((self.src, self.dst, tuple(sorted((describe(k), describe(v)) for k, v in self.components.items()))))

    def label(self) -> str:
        comps = ",".join(f"{describe(n)}:{describe(f)}" for n, f in self.components.items())
        return f"{self.src.label()}->{self.dst.label()}[{comps}]"


def graded_algebra(gm: GradedMonadData, ob: Dict[Any, Any], mor: Dict[Any, Any], structure: Dict[Tuple[Any, Any], Any], name: str = "") -> GradedAlgebra:
    M, C = gm.grading, gm.base
    full = dict(mor)
    for n in M.objects():
        full.setdefault(M.identity(n), C.identity(ob[n]))
    return GradedAlgebra(FunctorTable(M, C, ob, full, name=name or "A"), structure, name=name)


def _require_total(gm: GradedMonadData, what: str):
    if gm.grading.partial:
        raise PreconditionError(f"{what} needs a total tensor; {gm.grading.name} is partial")


# ---------- Law suites ----------


def validate_graded_algebra(gm: GradedMonadData, a: GradedAlgebra) -> LawReport:
    M, C = gm.grading, gm.base
    I = M.unit
    gobs, gmors = M.objects(), M.morphisms()
    rep = LawReport(f"graded algebra {a.label()}")
    rep.merge(validate_functor(a.carrier, gobs, gmors), prefix="carrier ")

    for m in gobs:
        for n in gobs:
            rep.check(
                "structure typing",
                VALUES,
                lambda m=m, n=n: ((C.dom(a.h(m, n)), C.cod(a.h(m, n))), (gm.T_ob(m, a.ob(n)), a.ob(M.tensor_ob(m, n)))),
                m=m, n=n,
            )
    if not rep.passed:
        return rep

    for u in gmors:
        for v in gmors:
            rep.check(
                "structure naturality",
                C,
                lambda u=u, v=v: (
                    C.compose(a.h(M.cod(u), M.cod(v)), gm.act_mor(u, a.mor(v))),
                    C.compose(a.mor(M.tensor_mor(u, v)), a.h(M.dom(u), M.dom(v))),
                ),
                u=u, v=v,
            )
    for n in gobs:
        rep.check("algebra unit", C, lambda n=n: (C.compose(a.h(I, n), gm.eta(a.ob(n))), C.identity(a.ob(n))), n=n)
    for l in gobs:
        for m in gobs:
            for n in gobs:
                rep.check(
                    "algebra associativity",
                    C,
                    lambda l=l, m=m, n=n: (
                        C.compose(a.h(M.tensor_ob(l, m), n), gm.mu(l, m, a.ob(n))),
                        C.compose(a.h(l, M.tensor_ob(m, n)), gm.T_mor(l, a.h(m, n))),
                    ),
                    l=l, m=m, n=n,
                )
    return rep


def is_graded_algebra(gm: GradedMonadData, a: GradedAlgebra) -> bool:
    return validate_graded_algebra(gm, a).passed


def validate_graded_algebra_hom(gm: GradedMonadData, phi: GradedAlgebraHom) -> LawReport:
    M, C = gm.grading, gm.base
    A, B = phi.src, phi.dst
    rep = LawReport(f"graded algebra hom {phi.label()}")
    for n in M.objects():
        rep.check(
            "component typing",
            VALUES,
            lambda n=n: ((C.dom(phi.at(n)), C.cod(phi.at(n))), (A.ob(n), B.ob(n))),
            n=n,
        )
    if not rep.passed:
        return rep
    for u in M.morphisms():
        rep.check(
            "naturality",
            C,
            lambda u=u: (C.compose(B.mor(u), phi.at(M.dom(u))), C.compose(phi.at(M.cod(u)), A.mor(u))),
            u=u,
        )
    for m in M.objects():
        for n in M.objects():
            rep.check(
                "homomorphism square",
                C,
                lambda m=m, n=n: (
                    C.compose(phi.at(M.tensor_ob(m, n)), A.h(m, n)),
                    C.compose(B.h(m, n), gm.T_mor(m, phi.at(n))),
                ),
                m=m, n=n,
            )
    return rep


# ---------- The strict action and free algebras ----------


def em_graded_action(gm: GradedMonadData, p: Any, a: GradedAlgebra) -> GradedAlgebra:
    _require_total(gm, "the action on algebras")
    M = gm.grading
    if p == M.unit:
        return a
    id_p = M.identity(p)
    ob = {n: a.ob(M.tensor_ob(n, p)) for n in M.objects()}
    mor = {u: a.mor(M.tensor_mor(u, id_p)) for u in M.morphisms()}
    structure = {(m, n): a.h(m, M.tensor_ob(n, p)) for m in M.objects() for n in M.objects()}
    return GradedAlgebra(FunctorTable(M, gm.base, ob, mor, name=f"{describe(p)}(*)A"), structure)


def em_graded_action_mor(gm: GradedMonadData, u: Any, phi: GradedAlgebraHom) -> GradedAlgebraHom:
    """u (*) phi: p (*) A -> p' (*) A' with components A'(n (x) u) . phi_{n(x)p}."""
    M, C = gm.grading, gm.base
    p, p2 = M.dom(u), M.cod(u)
    src = em_graded_action(gm, p, phi.src)
    dst = em_graded_action(gm, p2, phi.dst)
    comps = {
        n: C.compose(phi.dst.mor(M.tensor_mor(M.identity(n), u)), phi.at(M.tensor_ob(n, p)))
        for n in M.objects()
    }
    return GradedAlgebraHom(src, dst, comps)


def em_graded_strict_action(gm: GradedMonadData, em: "EMGradedCategory") -> StrictActionData:
    return StrictActionData(
        gm.grading,
        em,
        lambda p, a: em_graded_action(gm, p, a),
        lambda u, phi: em_graded_action_mor(gm, u, phi),
        name="(*)",
    )


def free_algebra(gm: GradedMonadData, p: Any, c: Any) -> GradedAlgebra:
    _require_total(gm, "free algebras")
    M = gm.grading
    id_p = M.identity(p)
    ob = {n: gm.T_ob(M.tensor_ob(n, p), c) for n in M.objects()}
    mor = {u: gm.T_u(M.tensor_mor(u, id_p), c) for u in M.morphisms()}
    structure = {(m, n): gm.mu(m, M.tensor_ob(n, p), c) for m in M.objects() for n in M.objects()}
    return GradedAlgebra(FunctorTable(M, gm.base, ob, mor, name=f"f^T({describe(p)},{describe(c)})"), structure)


def free_algebra_mor(gm: GradedMonadData, u: Any, f: Any) -> GradedAlgebraHom:
    """f^T(u, f): f^T(p, c) -> f^T(p', c') with components (n (x) u) * f."""
    M, C = gm.grading, gm.base
    p, p2 = M.dom(u), M.cod(u)
    src = free_algebra(gm, p, C.dom(f))
    dst = free_algebra(gm, p2, C.cod(f))
    comps = {n: gm.act_mor(M.tensor_mor(M.identity(n), u), f) for n in M.objects()}
    return GradedAlgebraHom(src, dst, comps)


# ---------- The category ----------


class EMGradedCategory(Category):
    def __init__(self, gm: GradedMonadData, objects: Optional[List[GradedAlgebra]] = None, enumerated: bool = False):
        self.gm = gm
        self.name = f"EM({gm.name})"
        self.enumerable = enumerated
        if objects is None:
            cobs = gm.objects if gm.objects is not None else gm.base.sample_objects()
            objects = [free_algebra(gm, p, c) for p in gm.grading.objects() for c in cobs]
        self._objects = list(dict.fromkeys(objects))

    def objects(self) -> List[GradedAlgebra]:
        return list(self._objects)

    def hom(self, a: GradedAlgebra, b: GradedAlgebra) -> List[GradedAlgebraHom]:
        return enumerate_algebra_homs(self.gm, a, b)

    def sample_morphisms(self) -> List[GradedAlgebraHom]:
        gm = self.gm
        M, C = gm.grading, gm.base
        out = [self.identity(a) for a in self._objects]
        if not self.enumerable:
            cmors = gm.morphisms if gm.morphisms is not None else C.sample_morphisms()
            out += [free_algebra_mor(gm, u, f) for u in M.morphisms() for f in cmors]
        else:
            out = [f for a in self._objects for b in self._objects for f in self.hom(a, b)]
        return out

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, a):
        C = self.gm.base
        return GradedAlgebraHom(a, a, {n: C.identity(a.ob(n)) for n in self.gm.grading.objects()})

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose {g.label()} after {f.label()}")
        C = self.gm.base
        return GradedAlgebraHom(f.src, g.dst, {n: C.compose(g.at(n), f.at(n)) for n in self.gm.grading.objects()})

    def equal(self, f, g):
        C = self.gm.base
        return f.src == g.src and f.dst == g.dst and all(C.equal(f.at(n), g.at(n)) for n in self.gm.grading.objects())

    def witness(self, f, g):
        if f.src != g.src or f.dst != g.dst:
            return "different endpoints"
        C = self.gm.base
        for n in self.gm.grading.objects():
            if not C.equal(f.at(n), g.at(n)):
                return f"n={describe(n)}: {C.witness(f.at(n), g.at(n))}"
        return None

    def sort_key(self, f):
        C = self.gm.base
        return (f.src.label(), f.dst.label(), tuple(describe(C.sort_key(f.at(n))) for n in self.gm.grading.objects()))

    def label_object(self, x):
        return x.label()

    def label_morphism(self, f):
        return f"{f.src.label()}->{f.dst.label()}"


def enumerate_algebra_homs(gm: GradedMonadData, a: GradedAlgebra, b: GradedAlgebra) -> List[GradedAlgebraHom]:
    M, C = gm.grading, gm.base
    gobs = M.objects()
    variables = [Variable(n, (lambda asg, n=n: C.hom(a.ob(n), b.ob(n)))) for n in gobs]
    constraints = []
    for u in M.morphisms():
        x, y = M.dom(u), M.cod(u)
        constraints.append(
            Constraint(
                f"naturality {describe(u)}",
                tuple(dict.fromkeys((x, y))),
                lambda asg, u=u, x=x, y=y: C.equal(C.compose(b.mor(u), asg[x]), C.compose(asg[y], a.mor(u))),
            )
        )
    for m in gobs:
        for n in gobs:
            mn = M.tensor_ob(m, n)
            constraints.append(
                Constraint(
                    f"homomorphism square {describe(m)},{describe(n)}",
                    tuple(dict.fromkeys((n, mn))),
                    lambda asg, m=m, n=n, mn=mn: C.equal(C.compose(asg[mn], a.h(m, n)), C.compose(b.h(m, n), gm.T_mor(m, asg[n]))),
                )
            )
    return [GradedAlgebraHom(a, b, {n: sol[n] for n in gobs}) for sol in solve(variables, constraints)]


def em_graded_enumerate(gm: GradedMonadData, max_cells: Optional[int] = None) -> EMGradedCategory:
    _require_total(gm, "EM enumeration")
    M, C = gm.grading, gm.base
    bound = max_cells if max_cells is not None else active_config().micro_em_cells
    cells = len(M.objects()) * len(C.objects())
    if cells > bound:
        raise SizeBoundError(f"EM({gm.name}) enumeration needs {cells} cells, micro bound is {bound}")
    I = M.unit
    gobs = M.objects()
    pairs = [(m, n) for m in gobs for n in gobs]

    algebras: List[GradedAlgebra] = []
    for carrier in enumerate_functors(M, C):
        A = carrier

        variables = [
            Variable(("h", m, n), (lambda asg, m=m, n=n: C.hom(gm.T_ob(m, A.ob(n)), A.ob(M.tensor_ob(m, n)))))
            for m, n in pairs
        ]
        constraints = [
            Constraint(
                f"unit {describe(n)}",
                (("h", I, n),),
                lambda asg, n=n: C.equal(C.compose(asg[("h", I, n)], gm.eta(A.ob(n))), C.identity(A.ob(n))),
            )
            for n in gobs
        ]
        for u in M.morphisms():
            for v in M.morphisms():
                src, dst = ("h", M.dom(u), M.dom(v)), ("h", M.cod(u), M.cod(v))
                constraints.append(
                    Constraint(
                        f"naturality {describe(u)},{describe(v)}",
                        tuple(dict.fromkeys((src, dst))),
                        lambda asg, u=u, v=v, src=src, dst=dst: C.equal(
                            C.compose(asg[dst], gm.act_mor(u, A.mor(v))), C.compose(A.mor(M.tensor_mor(u, v)), asg[src])
                        ),
                    )
                )
        for l in gobs:
            for m in gobs:
                for n in gobs:
                    k1, k2, k3 = ("h", M.tensor_ob(l, m), n), ("h", l, M.tensor_ob(m, n)), ("h", m, n)
                    constraints.append(
                        Constraint(
                            f"associativity {describe(l)},{describe(m)},{describe(n)}",
                            tuple(dict.fromkeys((k1, k2, k3))),
                            lambda asg, l=l, m=m, n=n, k1=k1, k2=k2, k3=k3: C.equal(
                                C.compose(asg[k1], gm.mu(l, m, A.ob(n))), C.compose(asg[k2], gm.T_mor(l, asg[k3]))
                            ),
                        )
                    )
        for sol in solve(variables, constraints):
            algebras.append(GradedAlgebra(carrier, {(m, n): sol[("h", m, n)] for m, n in pairs}))
    algebras.sort(key=lambda a: a.label())
    log.info("EM(%s): %d graded algebras", gm.name, len(algebras))
    return EMGradedCategory(gm, algebras, enumerated=True)


# ---------- Free / forgetful adjunction ----------


@dataclass
class EMGradedAdjunction:
    gm: GradedMonadData
    category: EMGradedCategory

    def free(self, p: Any, c: Any) -> GradedAlgebra:
        return free_algebra(self.gm, p, c)

    def free_mor(self, u: Any, f: Any) -> GradedAlgebraHom:
        return free_algebra_mor(self.gm, u, f)

    def forget(self, a: GradedAlgebra) -> Any:
        return a.ob(self.gm.grading.unit)

    def forget_mor(self, phi: GradedAlgebraHom) -> Any:
        return phi.at(self.gm.grading.unit)

    def unit(self, c: Any) -> Any:
        return self.gm.eta(c)

    def counit(self, p: Any, a: GradedAlgebra) -> GradedAlgebraHom:
        """eps^T_{p,A}: f^T(p, A_I) -> p (*) A with components h_{n(x)p, I}."""
        M = self.gm.grading
        I = M.unit
        src = free_algebra(self.gm, p, a.ob(I))
        dst = em_graded_action(self.gm, p, a)
        return GradedAlgebraHom(src, dst, {n: a.h(M.tensor_ob(n, p), I) for n in M.objects()})

    def as_adjunction(self) -> AdjunctionData:
        gm, em = self.gm, self.category
        M = gm.grading
        I = M.unit
        left = ComputedFunctor(gm.base, em, lambda c: self.free(I, c), lambda f: self.free_mor(M.identity(I), f), name="f^T")
        right = ComputedFunctor(em, gm.base, self.forget, self.forget_mor, name="u^T")
        return AdjunctionData(left, right, self.unit, lambda a: self.counit(I, a), name=f"f^T-|u^T({gm.name})")

    def strict_action(self) -> StrictActionData:
        return em_graded_strict_action(self.gm, self.category)


def em_graded_adjunction(gm: GradedMonadData, category: Optional[EMGradedCategory] = None) -> EMGradedAdjunction:
    _require_total(gm, "the EM adjunction")
    return EMGradedAdjunction(gm, category or EMGradedCategory(gm))


def check_em_graded_adjunction(adj: EMGradedAdjunction, objects=None, morphisms=None) -> LawReport:
    gm, em = adj.gm, adj.category
    M, C = gm.grading, gm.base
    obs = list(objects if objects is not None else (gm.objects if gm.objects is not None else C.sample_objects()))
    mors = list(morphisms if morphisms is not None else (gm.morphisms if gm.morphisms is not None else C.sample_morphisms()))
    rep = LawReport(f"EM adjunction {gm.name}")

    for p in M.objects():
        for c in obs:
            rep.check("resolution identity", VALUES, lambda p=p, c=c: (adj.forget(adj.free(p, c)), gm.T_ob(p, c)), p=p, object=c)
        for f in mors:
            rep.check("resolution identity", C, lambda p=p, f=f: (adj.forget_mor(adj.free_mor(M.identity(p), f)), gm.T_mor(p, f)), p=p, morphism=f)
    for u in M.morphisms():
        for c in obs:
            rep.check("resolution identity", C, lambda u=u, c=c: (adj.forget_mor(adj.free_mor(u, C.identity(c))), gm.T_u(u, c)), u=u, object=c)
    for m in M.objects():
        for n in M.objects():
            for c in obs:
                rep.check(
                    "resolution identity",
                    C,
                    lambda m=m, n=n, c=c: (adj.forget_mor(adj.counit(m, adj.free(n, c))), gm.mu(m, n, c)),
                    m=m, n=n, object=c,
                )

    for p in M.objects():
        for c in obs:
            a = adj.free(p, c)
            rep.absorb(validate_graded_algebra(gm, a), prefix="free ", p=p, object=c)
            for q in M.objects():
                rep.absorb(validate_graded_algebra_hom(gm, adj.counit(q, a)), prefix="counit ", p=q, algebra=a)

    cobs = em.objects()
    rep.merge(check_adjunction(adj.as_adjunction(), obs, cobs))
    log.info("checked EM adjunction of %s: %s", gm.name, rep.counts())
    return rep
