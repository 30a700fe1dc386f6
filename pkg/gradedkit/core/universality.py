from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from gradedkit.core.config import active_config
from gradedkit.core.errors import PreconditionError, SizeBoundError, SpecError
from gradedkit.core.fincat import Category
from gradedkit.core.functors import ComputedFunctor, Functor, FunctorTable, validate_functor
from gradedkit.core.em_graded import (
    EMGradedAdjunction,
    GradedAlgebra,
    GradedAlgebraHom,
    em_graded_action,
    em_graded_action_mor,
    em_graded_adjunction,
    validate_graded_algebra,
    validate_graded_algebra_hom,
)
from gradedkit.core.em_indexed import (
    EMIndexedAdjunction,
    IndexedEMMorphism,
    IndexedEMObject,
    em_indexed_adjunction,
    is_indexed_em_morphism,
)
from gradedkit.core.graded import GradedMonadData, StrictActionData, check_strict_action
from gradedkit.core.indexed import IndexedMonadData
from gradedkit.core.kleisli import KleisliAdjunction, KleisliCategory, KleisliObject, kl_action, kl_act_ob, kl_adjunction, kl_decompose
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)

KINDS = ("em-graded", "kl-graded", "em-indexed")


class _Componentwise:
    name = "components"

    def __init__(self, M: Category, C: Category):
        self.M, self.C = M, C

    def equal(self, f, g):
        return all(self.C.equal(f.at(n), g.at(n)) for n in self.M.objects())

    def witness(self, f, g):
        for n in self.M.objects():
            if not self.C.equal(f.at(n), g.at(n)):
                return f"n={describe(n)}: {self.C.witness(f.at(n), g.at(n))}"
        return None


# ---------- Module data ----------


@dataclass
class LeftModuleData:
    gm: GradedMonadData
    action: StrictActionData
    g: Functor
    gamma: Callable[[Any, Any], Any]
    objects: List[Any]
    morphisms: List[Any]
    name: str = "left module"

    @property
    def carrier(self) -> Category:
        return self.action.carrier


@dataclass
class RightModuleData:
    gm: GradedMonadData
    action: StrictActionData
    g: Functor
    gamma: Callable[[Any, Any], Any]
    name: str = "right module"

    @property
    def carrier(self) -> Category:
        return self.action.carrier


@dataclass
class IndexedModuleData:
    im: IndexedMonadData
    carrier: Category
    index_functor: Functor
    g: Functor
    gamma: Callable[[Any], Any]
    objects: List[Any]
    morphisms: List[Any]
    name: str = "indexed module"


@dataclass
class LeftModuleMorphism:
    source: LeftModuleData
    target: LeftModuleData
    functor: Functor
    omega: Callable[[Any], Any]
    name: str = "omega"


@dataclass
class RightModuleMorphism:
    source: RightModuleData
    target: RightModuleData
    functor: Functor
    omega: Callable[[Any], Any]
    name: str = "omega"


@dataclass
class IndexedModuleMorphism:
    source: IndexedModuleData
    target: IndexedModuleData
    functor: Functor
    omega: Callable[[Any], Any]
    name: str = "omega"


@dataclass
class Candidate:
    ob: Callable[[Any], Any]
    mor: Callable[[Any], Any]
    note: str = "as constructed"


@dataclass
class Factorization:
    kind: str
    candidate: Candidate
    report: LawReport
    audit: Optional[LawReport] = None
    source: Optional[Category] = None
    target: Optional[Category] = None
    samples: Dict[str, List[Any]] = field(default_factory=dict)

    def ob(self, x: Any) -> Any:
        return self.candidate.ob(x)

    def mor(self, f: Any) -> Any:
        return self.candidate.mor(f)

    @property
    def passed(self) -> bool:
        return self.report.passed and (self.audit is None or self.audit.passed)

    def functor(self, name: str = "g~") -> Functor:
        return ComputedFunctor(self.source, self.target, self.candidate.ob, self.candidate.mor, name=name)

    def table(self) -> Dict[str, Dict[str, str]]:
        return {
            "ob": {describe(x): describe(self.ob(x)) for x in self.samples.get("objects", [])},
            "mor": {describe(f): describe(self.mor(f)) for f in self.samples.get("morphisms", [])},
        }


# ---------- Module equation suites ----------


def check_left_module(mod: LeftModuleData) -> LawReport:
    gm, act, g = mod.gm, mod.action, mod.g
    M, C, D = gm.grading, gm.base, mod.carrier
    I = M.unit
    rep = LawReport(f"left module {mod.name}")
    rep.merge(check_strict_action(act, mod.objects, mod.morphisms), prefix="module action ")
    rep.merge(validate_functor(g, mod.objects, mod.morphisms), prefix="module functor ")
    for u in M.morphisms():
        for w in mod.morphisms:
            rep.check(
                "module naturality",
                C,
                lambda u=u, w=w: (
                    C.compose(mod.gamma(M.cod(u), D.cod(w)), gm.act_mor(u, g.mor(w))),
                    C.compose(g.mor(act.act_mor(u, w)), mod.gamma(M.dom(u), D.dom(w))),
                ),
                u=u, morphism=w,
            )
    for d in mod.objects:
        rep.check("module unit", C, lambda d=d: (C.compose(mod.gamma(I, d), gm.eta(g.ob(d))), C.identity(g.ob(d))), object=d)
        for l in M.objects():
            for m in M.objects():
                rep.check(
                    "module associativity",
                    C,
                    lambda l=l, m=m, d=d: (
                        C.compose(mod.gamma(M.tensor_ob(l, m), d), gm.mu(l, m, g.ob(d))),
                        C.compose(mod.gamma(l, act.act_ob(m, d)), gm.T_mor(l, mod.gamma(m, d))),
                    ),
                    l=l, m=m, object=d,
                )
    return rep


def check_right_module(mod: RightModuleData, objects=None, morphisms=None) -> LawReport:
    gm, act, g = mod.gm, mod.action, mod.g
    M, C, D = gm.grading, gm.base, mod.carrier
    I = M.unit
    cobs = list(objects if objects is not None else (gm.objects if gm.objects is not None else C.sample_objects()))
    cmors = list(morphisms if morphisms is not None else (gm.morphisms if gm.morphisms is not None else C.sample_morphisms()))
    rep = LawReport(f"right module {mod.name}")
    rep.merge(validate_functor(g, cobs, cmors), prefix="module functor ")
    dobs = [g.ob(c) for c in cobs]
    rep.merge(check_strict_action(act, dobs, [g.mor(f) for f in cmors]), prefix="module action ")
    for u in M.morphisms():
        for f in cmors:
            rep.check(
                "module naturality",
                D,
                lambda u=u, f=f: (
                    D.compose(act.act_mor(u, g.mor(f)), mod.gamma(M.dom(u), C.dom(f))),
                    D.compose(mod.gamma(M.cod(u), C.cod(f)), g.mor(gm.act_mor(u, f))),
                ),
                u=u, morphism=f,
            )
    for c in cobs:
        rep.check("module unit", D, lambda c=c: (D.compose(mod.gamma(I, c), g.mor(gm.eta(c))), D.identity(g.ob(c))), object=c)
        for l in M.objects():
            for m in M.objects():
                rep.check(
                    "module associativity",
                    D,
                    lambda l=l, m=m, c=c: (
                        D.compose(mod.gamma(M.tensor_ob(l, m), c), g.mor(gm.mu(l, m, c))),
                        D.compose(act.whisker(l, mod.gamma(m, c)), mod.gamma(l, gm.T_ob(m, c))),
                    ),
                    l=l, m=m, object=c,
                )
    return rep


def check_indexed_module(mod: IndexedModuleData) -> LawReport:
    im, G, g = mod.im, mod.index_functor, mod.g
    B, C = im.index, im.base
    rep = LawReport(f"indexed module {mod.name}")
    rep.merge(validate_functor(G, mod.objects, mod.morphisms), prefix="module index ")
    rep.merge(validate_functor(g, mod.objects, mod.morphisms), prefix="module functor ")
    for x in mod.objects:
        b, c = G.ob(x), g.ob(x)
        rep.check("module unit", C, lambda x=x, b=b, c=c: (C.compose(mod.gamma(x), im.eta(b, c)), C.identity(c)), object=x)
        rep.check(
            "module associativity",
            C,
            lambda x=x, b=b, c=c: (C.compose(mod.gamma(x), im.T_mor(b, mod.gamma(x))), C.compose(mod.gamma(x), im.mu(b, c))),
            object=x,
        )
    D = mod.carrier
    for w in mod.morphisms:
        x, y = D.dom(w), D.cod(w)
        rep.check(
            "module naturality",
            C,
            lambda w=w, x=x, y=y: (
                C.compose(g.mor(w), mod.gamma(x)),
                C.compose_all(mod.gamma(y), im.T_u(G.mor(w), g.ob(y)), im.T_mor(G.ob(x), g.mor(w))),
            ),
            morphism=w,
        )
    return rep


# ---------- Universal modules and modules of resolutions ----------


def universal_left_module(adj: EMGradedAdjunction) -> LeftModuleData:
    em = adj.category
    right = adj.as_adjunction().right
    return LeftModuleData(
        adj.gm,
        adj.strict_action(),
        right,
        lambda m, a: a.h(m, adj.gm.grading.unit),
        em.objects(),
        em.sample_morphisms(),
        name=f"universal({em.name})",
    )


def universal_right_module(adj: KleisliAdjunction) -> RightModuleData:
    kl = adj.category
    return RightModuleData(
        adj.gm,
        adj.strict_action(),
        adj.as_adjunction().left,
        lambda m, c: adj.counit(KleisliObject(m, c)),
        name=f"universal({kl.name})",
    )


def universal_indexed_module(adj: EMIndexedAdjunction) -> IndexedModuleData:
    em = adj.category
    return IndexedModuleData(
        adj.im,
        em,
        ComputedFunctor(em, adj.im.index, lambda x: x.index, lambda f: f.u, name="pi0"),
        ComputedFunctor(em, adj.im.base, lambda x: x.carrier, lambda f: f.h, name="u"),
        lambda x: x.structure,
        em.objects(),
        em.morphisms(),
        name=f"universal({em.name})",
    )


def left_module_of_resolution(gm: GradedMonadData, res, objects=None, morphisms=None) -> LeftModuleData:
    adj, act = res.adj, res.strict
    A = adj.carrier
    obs = list(objects if objects is not None else A.sample_objects())
    mors = list(morphisms if morphisms is not None else A.sample_morphisms())
    return LeftModuleData(
        gm,
        act,
        adj.right,
        lambda m, a: adj.right.mor(act.whisker(m, adj.counit(a))),
        obs,
        mors,
        name=f"left({res.name})",
    )


def right_module_of_resolution(gm: GradedMonadData, res) -> RightModuleData:
    adj, act = res.adj, res.strict
    return RightModuleData(
        gm,
        act,
        adj.left,
        lambda m, c: adj.counit(act.act_ob(m, adj.left.ob(c))),
        name=f"right({res.name})",
    )


def indexed_module_of_adjunction(im: IndexedMonadData, adj, objects=None, morphisms=None) -> IndexedModuleData:
    D = adj.carrier
    r = adj.right
    obs = list(objects if objects is not None else D.sample_objects())
    mors = list(morphisms if morphisms is not None else D.sample_morphisms())
    return IndexedModuleData(
        im,
        D,
        ComputedFunctor(D, im.index, lambda x: r.ob(x)[0], lambda f: r.mor(f)[0], name="Gamma"),
        ComputedFunctor(D, im.base, lambda x: r.ob(x)[1], lambda f: r.mor(f)[1], name="g"),
        lambda x: r.mor(adj.counit(x))[1],
        obs,
        mors,
        name=f"indexed({adj.name})",
    )


# ---------- EM (graded) factorization ----------


def _em_candidate(mod: LeftModuleData) -> Candidate:
    gm, act, g = mod.gm, mod.action, mod.g
    M, C, D = gm.grading, gm.base, mod.carrier

    def ob(d):
        ob_map = {n: g.ob(act.act_ob(n, d)) for n in M.objects()}
        mor_map = {u: g.mor(act.act_mor(u, D.identity(d))) for u in M.morphisms()}
        structure = {(m, n): mod.gamma(m, act.act_ob(n, d)) for m in M.objects() for n in M.objects()}
        return GradedAlgebra(FunctorTable(M, C, ob_map, mor_map, name=f"g~({describe(d)})"), structure)

    def mor(w):
        comps = {n: g.mor(act.whisker(n, w)) for n in M.objects()}
        return GradedAlgebraHom(ob(D.dom(w)), ob(D.cod(w)), comps)

    return Candidate(ob, mor)


def _em_equations(mod: LeftModuleData, cand: Candidate, full: bool = False) -> LawReport:
    gm, act, g = mod.gm, mod.action, mod.g
    M, C, D = gm.grading, gm.base, mod.carrier
    I = M.unit
    comp = _Componentwise(M, C)
    rep = LawReport(f"EM factorization of {mod.name}")
    mors = list(mod.morphisms) + [D.identity(d) for d in mod.objects]

    def rebuilt(w):
        return GradedAlgebraHom(cand.ob(D.dom(w)), cand.ob(D.cod(w)), cand.mor(w).components)

    for d in mod.objects:
        rep.check("factor through u^T", VALUES, lambda d=d: (cand.ob(d).ob(I), g.ob(d)), object=d)
        for m in M.objects():
            rep.check("factor counit", C, lambda m=m, d=d: (cand.ob(d).h(m, I), mod.gamma(m, d)), m=m, object=d)
            rep.check(
                "factor commutes with action",
                VALUES,
                lambda m=m, d=d: (cand.ob(act.act_ob(m, d)), em_graded_action(gm, m, cand.ob(d))),
                m=m, object=d,
            )
        if full:
            rep.absorb(validate_graded_algebra(gm, cand.ob(d)), prefix="factor algebra: ", object=d)
    for w in mors:
        rep.check("factor through u^T", C, lambda w=w: (cand.mor(w).at(I), g.mor(w)), morphism=w)
        for u in M.morphisms():
            rep.check(
                "factor commutes with action",
                comp,
                lambda u=u, w=w: (cand.mor(act.act_mor(u, w)), em_graded_action_mor(gm, u, rebuilt(w))),
                u=u, morphism=w,
            )
        if full:
            rep.absorb(validate_graded_algebra_hom(gm, cand.mor(w)), prefix="factor homomorphism: ", morphism=w)
    return rep


def _em_perturbers(mod: LeftModuleData, base: Candidate) -> List[Callable[[random.Random], Optional[Candidate]]]:
    gm, D = mod.gm, mod.carrier
    M, C = gm.grading, gm.base

    def alternative(rng, current):
        try:
            alts = [x for x in C.hom(C.dom(current), C.cod(current)) if not C.equal(x, current)]
        except SizeBoundError:
            return None
        return rng.choice(alts) if alts else None

    def perturb_object(rng):
        if not mod.objects:
            return None
        d = rng.choice(mod.objects)
        a = base.ob(d)
        slots = [("h", k) for k in a.structure] + [("mor", u) for u in M.morphisms() if not M.is_identity(u)]
        rng.shuffle(slots)
        for kind, key in slots:
            current = a.structure[key] if kind == "h" else a.mor(key)
            alt = alternative(rng, current)
            if alt is None:
                continue
            if kind == "h":
                b = GradedAlgebra(a.carrier, {**a.structure, key: alt})
            else:
                carrier = FunctorTable(M, C, a.carrier.ob_map, {**a.carrier.mor_map, key: alt})
                b = GradedAlgebra(carrier, a.structure)
            return Candidate(lambda x, d=d, b=b: b if x == d else base.ob(x), base.mor, note=f"object {describe(d)}: {kind} {describe(key)}")
        return None

    def perturb_morphism(rng):
        mors = list(mod.morphisms) + [D.identity(d) for d in mod.objects]
        if not mors:
            return None
        w = rng.choice(mors)
        phi = base.mor(w)
        ns = list(M.objects())
        rng.shuffle(ns)
        for n in ns:
            alt = alternative(rng, phi.at(n))
            if alt is None:
                continue
            psi = GradedAlgebraHom(phi.src, phi.dst, {**phi.components, n: alt})
            return Candidate(base.ob, lambda y, w=w, psi=psi: psi if y == w else base.mor(y), note=f"morphism {describe(w)}: component {describe(n)}")
        return None

    return [perturb_object, perturb_morphism]


# ---------- Kleisli (graded) factorization ----------


def _kl_candidate(mod: RightModuleData) -> Candidate:
    gm, act, g = mod.gm, mod.action, mod.g
    D = mod.carrier

    def ob(x):
        return act.act_ob(x.grade, g.ob(x.obj))

    def mor(cls):
        n, v, f = cls.rep
        m, c2 = cls.src.grade, cls.dst.obj
        return D.compose_all(
            act.act_mor(v, D.identity(g.ob(c2))),
            act.whisker(m, mod.gamma(n, c2)),
            act.whisker(m, g.mor(f)),
        )

    return Candidate(ob, mor)


def kleisli_samples(kl: KleisliCategory) -> List[Any]:
    return [cls for a in kl.objects() for b in kl.objects() for cls in kl.hom(a, b)]


def _kl_equations(mod: RightModuleData, kl: KleisliCategory, cand: Candidate, full: bool = False) -> LawReport:
    gm, act, g = mod.gm, mod.action, mod.g
    M, C, D = gm.grading, gm.base, mod.carrier
    adj = kl_adjunction(gm, kl)
    rep = LawReport(f"Kleisli factorization of {mod.name}")

    for x in kl.objects():
        rep.check("factor through f_T", VALUES, lambda x=x: (cand.ob(adj.free(x.obj)), g.ob(x.obj)), object=x)
        for l in M.objects():
            rep.check("factor commutes with action", VALUES, lambda l=l, x=x: (cand.ob(kl_act_ob(kl, l, x)), act.act_ob(l, cand.ob(x))), m=l, object=x)
        rep.check("factor identity", D, lambda x=x: (cand.mor(kl.identity(x)), D.identity(cand.ob(x))), object=x)

    for cls in kleisli_samples(kl):
        n, v, f = cls.rep
        m, c2 = cls.src.grade, cls.dst.obj
        first, second, third = kl_decompose(kl, cls)
        ft_f, eps, ft_id = adj.free_mor(f), adj.counit(KleisliObject(n, c2)), kl.identity(adj.free(c2))
        rep.check("factor through f_T", D, lambda f=f, ft_f=ft_f: (cand.mor(ft_f), g.mor(f)), morphism=cls)
        rep.check("factor counit", D, lambda n=n, c2=c2, eps=eps: (cand.mor(eps), mod.gamma(n, c2)), morphism=cls)
        rep.check("factor identity", D, lambda ft_id=ft_id, c2=c2: (cand.mor(ft_id), D.identity(g.ob(c2))), morphism=cls)
        for u, y, image in ((M.identity(m), ft_f, first), (M.identity(m), eps, second), (v, ft_id, third)):
            rep.check(
                "factor commutes with action",
                D,
                lambda u=u, y=y, image=image: (cand.mor(image), act.act_mor(u, cand.mor(y))),
                morphism=cls, u=u,
            )
        rep.check(
            "factor decomposition",
            D,
            lambda cls=cls, first=first, second=second, third=third: (cand.mor(cls), D.compose_all(cand.mor(third), cand.mor(second), cand.mor(first))),
            morphism=cls,
        )
        if full:
            for t in cls.members:
                probe = type(cls)(cls.src, cls.dst, t)
                rep.check("factor well-defined", D, lambda probe=probe, cls=cls: (cand.mor(probe), cand.mor(cls)), morphism=cls, member=t)
            for u in M.morphisms():
                rep.check(
                    "factor commutes with action",
                    D,
                    lambda u=u, cls=cls: (cand.mor(kl_action(kl, u, cls)), act.act_mor(u, cand.mor(cls))),
                    u=u, morphism=cls,
                )
    if full:
        rep.merge(validate_functor(ComputedFunctor(kl, D, cand.ob, cand.mor, name="g~"), kl.objects(), kleisli_samples(kl)), prefix="factor functor ")
    return rep


def _kl_perturbers(mod: RightModuleData, kl: KleisliCategory, base: Candidate):
    D = mod.carrier
    samples = kleisli_samples(kl)

    def perturb_morphism(rng):
        if not samples:
            return None
        order = list(samples)
        rng.shuffle(order)
        for cls in order:
            value = base.mor(cls)
            try:
                alts = [x for x in D.hom(D.dom(value), D.cod(value)) if not D.equal(x, value)]
            except SizeBoundError:
                continue
            if alts:
                alt = rng.choice(alts)
                return Candidate(base.ob, lambda y, cls=cls, alt=alt: alt if y == cls else base.mor(y), note=f"class {cls.label()}")
        return None

    return [perturb_morphism]


# ---------- EM (indexed) factorization ----------


def _ix_candidate(mod: IndexedModuleData) -> Candidate:
    G, g, D = mod.index_functor, mod.g, mod.carrier

    def ob(x):
        return IndexedEMObject(G.ob(x), g.ob(x), mod.gamma(x))

    def mor(w):
        return IndexedEMMorphism(ob(D.dom(w)), ob(D.cod(w)), G.mor(w), g.mor(w))

    return Candidate(ob, mor)


def _ix_equations(mod: IndexedModuleData, cand: Candidate, full: bool = False) -> LawReport:
    im, G, g = mod.im, mod.index_functor, mod.g
    B, C = im.index, im.base
    rep = LawReport(f"indexed EM factorization of {mod.name}")
    for x in mod.objects:
        rep.check("factor projection", VALUES, lambda x=x: (cand.ob(x).index, G.ob(x)), object=x)
        rep.check("factor carrier", VALUES, lambda x=x: (cand.ob(x).carrier, g.ob(x)), object=x)
        rep.check("factor structure", C, lambda x=x: (cand.ob(x).structure, mod.gamma(x)), object=x)
    for w in mod.morphisms:
        rep.check("factor projection", B, lambda w=w: (cand.mor(w).u, G.mor(w)), morphism=w)
        rep.check("factor carrier", C, lambda w=w: (cand.mor(w).h, g.mor(w)), morphism=w)
        if full:
            f = cand.mor(w)
            rep.check_true("factor morphism", is_indexed_em_morphism(im, f.src, f.dst, f.u, f.h), morphism=w)
    return rep


def _ix_perturbers(mod: IndexedModuleData, base: Candidate):
    im = mod.im
    B, C = im.index, im.base

    def pick(rng, cat, current):
        try:
            alts = [x for x in cat.hom(cat.dom(current), cat.cod(current)) if not cat.equal(x, current)]
        except SizeBoundError:
            return None
        return rng.choice(alts) if alts else None

    def perturb_object(rng):
        order = list(mod.objects)
        rng.shuffle(order)
        for x in order:
            y = base.ob(x)
            alt = pick(rng, C, y.structure)
            if alt is not None:
                z = IndexedEMObject(y.index, y.carrier, alt)
                return Candidate(lambda o, x=x, z=z: z if o == x else base.ob(o), base.mor, note=f"object {describe(x)}: structure")
        return None

    def perturb_morphism(rng):
        order = list(mod.morphisms)
        rng.shuffle(order)
        for w in order:
            f = base.mor(w)
            slots = [("h", C, f.h), ("u", B, f.u)]
            rng.shuffle(slots)
            for slot, cat, current in slots:
                alt = pick(rng, cat, current)
                if alt is None:
                    continue
                g2 = IndexedEMMorphism(f.src, f.dst, alt if slot == "u" else f.u, alt if slot == "h" else f.h)
                return Candidate(base.ob, lambda v, w=w, g2=g2: g2 if v == w else base.mor(v), note=f"morphism {describe(w)}: {slot}")
        return None

    return [perturb_object, perturb_morphism]


# ---------- Audit ----------


def uniqueness_audit(
    subject: str,
    equations: Callable[[Candidate], LawReport],
    perturbers: List[Callable[[random.Random], Optional[Candidate]]],
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> LawReport:
    cfg = active_config()
    count = cfg.perturbations if count is None else count
    rng = random.Random(cfg.seed if seed is None else seed)
    rep = LawReport(f"uniqueness {subject}")
    made = attempts = 0
    while made < count and attempts < 20 * max(count, 1):
        attempts += 1
        cand = rng.choice(perturbers)(rng)
        if cand is None:
            continue
        made += 1
        verdict = equations(cand)
        first = verdict.first_failure()
        rep.check_true("uniqueness", first is not None, perturbation=cand.note, rejected_by=first.axiom if first else None)
    if made == 0:
        rep.skip("uniqueness", reason="no component admits an alternative value")
    log.info("uniqueness audit %s: %d candidates, %s", subject, made, rep.counts())
    return rep


# ---------- Entry points ----------


def factorize_module(kind: str, mod, audit: bool = True, count: Optional[int] = None, seed: Optional[int] = None, kleisli: Optional[KleisliCategory] = None) -> Factorization:
    if kind == "em-graded":
        pre = check_left_module(mod)
        _refuse(pre, mod.name)
        cand = _em_candidate(mod)
        report = _em_equations(mod, cand, full=True)
        em = em_graded_adjunction(mod.gm).category
        out = Factorization(kind, cand, report, source=mod.carrier, target=em, samples={"objects": list(mod.objects), "morphisms": list(mod.morphisms)})
        if audit:
            out.audit = uniqueness_audit(mod.name, lambda c: _em_equations(mod, c), _em_perturbers(mod, cand), count, seed)
    elif kind == "kl-graded":
        pre = check_right_module(mod)
        _refuse(pre, mod.name)
        kl = kleisli or KleisliCategory(mod.gm)
        cand = _kl_candidate(mod)
        report = _kl_equations(mod, kl, cand, full=True)
        out = Factorization(kind, cand, report, source=kl, target=mod.carrier, samples={"objects": kl.objects(), "morphisms": kleisli_samples(kl)})
        if audit:
            out.audit = uniqueness_audit(mod.name, lambda c: _kl_equations(mod, kl, c), _kl_perturbers(mod, kl, cand), count, seed)
    elif kind == "em-indexed":
        pre = check_indexed_module(mod)
        _refuse(pre, mod.name)
        cand = _ix_candidate(mod)
        report = _ix_equations(mod, cand, full=True)
        em = em_indexed_adjunction(mod.im).category
        out = Factorization(kind, cand, report, source=mod.carrier, target=em, samples={"objects": list(mod.objects), "morphisms": list(mod.morphisms)})
        if audit:
            out.audit = uniqueness_audit(mod.name, lambda c: _ix_equations(mod, c), _ix_perturbers(mod, cand), count, seed)
    else:
        raise SpecError(f"unknown factorization kind {kind!r}", [f"known: {', '.join(KINDS)}"])
    log.info("factorized %s (%s): %s", mod.name, kind, out.report.counts())
    return out


def _refuse(pre: LawReport, name: str):
    if not pre.passed:
        first = pre.first_failure()
        log.warning("module %s fails %s", name, first.axiom if first else "?")
        raise PreconditionError(f"module {name} fails {first.axiom if first else 'its equations'}", pre)


# ---------- Module morphisms ----------


def check_left_module_morphism(mm: LeftModuleMorphism) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    gm = src.gm
    M, C, D = gm.grading, gm.base, src.carrier
    rep = LawReport(f"left module morphism {mm.name}")
    mors = list(src.morphisms) + [D.identity(d) for d in src.objects]
    for d in src.objects:
        for m in M.objects():
            rep.check("morphism action", VALUES, lambda m=m, d=d: (Om.ob(src.action.act_ob(m, d)), dst.action.act_ob(m, Om.ob(d))), m=m, object=d)
            rep.check(
                "morphism compatibility",
                C,
                lambda m=m, d=d: (
                    C.compose(mm.omega(src.action.act_ob(m, d)), src.gamma(m, d)),
                    C.compose(dst.gamma(m, Om.ob(d)), gm.T_mor(m, mm.omega(d))),
                ),
                m=m, object=d,
            )
    D2 = dst.carrier
    for w in mors:
        for u in M.morphisms():
            rep.check("morphism action", D2, lambda u=u, w=w: (Om.mor(src.action.act_mor(u, w)), dst.action.act_mor(u, Om.mor(w))), u=u, morphism=w)
        rep.check(
            "morphism naturality",
            C,
            lambda w=w: (C.compose(dst.g.mor(Om.mor(w)), mm.omega(D.dom(w))), C.compose(mm.omega(D.cod(w)), src.g.mor(w))),
            morphism=w,
        )
    return rep


def check_right_module_morphism(mm: RightModuleMorphism, objects=None, morphisms=None) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    gm = src.gm
    M, C, D = gm.grading, gm.base, src.carrier
    cobs = list(objects if objects is not None else (gm.objects if gm.objects is not None else C.sample_objects()))
    cmors = list(morphisms if morphisms is not None else (gm.morphisms if gm.morphisms is not None else C.sample_morphisms()))
    rep = LawReport(f"right module morphism {mm.name}")
    for c in cobs:
        y = dst.g.ob(c)
        for m in M.objects():
            rep.check("morphism action", VALUES, lambda m=m, y=y: (Om.ob(dst.action.act_ob(m, y)), src.action.act_ob(m, Om.ob(y))), m=m, object=c)
            rep.check(
                "morphism compatibility",
                D,
                lambda m=m, c=c: (
                    D.compose(src.action.whisker(m, mm.omega(c)), src.gamma(m, c)),
                    D.compose(Om.mor(dst.gamma(m, c)), mm.omega(gm.T_ob(m, c))),
                ),
                m=m, object=c,
            )
    for f in cmors:
        for u in M.morphisms():
            rep.check(
                "morphism action",
                D,
                lambda u=u, f=f: (Om.mor(dst.action.act_mor(u, dst.g.mor(f))), src.action.act_mor(u, Om.mor(dst.g.mor(f)))),
                u=u, morphism=f,
            )
        rep.check(
            "morphism naturality",
            D,
            lambda f=f: (D.compose(Om.mor(dst.g.mor(f)), mm.omega(C.dom(f))), D.compose(mm.omega(C.cod(f)), src.g.mor(f))),
            morphism=f,
        )
    return rep


def check_indexed_module_morphism(mm: IndexedModuleMorphism) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    im = src.im
    B, C, D = im.index, im.base, src.carrier
    rep = LawReport(f"indexed module morphism {mm.name}")
    for x in src.objects:
        rep.check("morphism over index", VALUES, lambda x=x: (dst.index_functor.ob(Om.ob(x)), src.index_functor.ob(x)), object=x)
        b = src.index_functor.ob(x)
        rep.check(
            "morphism compatibility",
            C,
            lambda x=x, b=b: (C.compose(mm.omega(x), src.gamma(x)), C.compose(dst.gamma(Om.ob(x)), im.T_mor(b, mm.omega(x)))),
            object=x,
        )
    for w in src.morphisms:
        rep.check("morphism over index", B, lambda w=w: (dst.index_functor.mor(Om.mor(w)), src.index_functor.mor(w)), morphism=w)
        rep.check(
            "morphism naturality",
            C,
            lambda w=w: (C.compose(dst.g.mor(Om.mor(w)), mm.omega(D.dom(w))), C.compose(mm.omega(D.cod(w)), src.g.mor(w))),
            morphism=w,
        )
    return rep


@dataclass
class TwoCellFactorization:
    kind: str
    component: Callable[[Any], Any]
    report: LawReport
    audit: Optional[LawReport] = None

    @property
    def passed(self) -> bool:
        return self.report.passed and (self.audit is None or self.audit.passed)


def _em_two_cell(mm: LeftModuleMorphism, comp: Callable[[Any], Any]) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    gm = src.gm
    M, C, D = gm.grading, gm.base, src.carrier
    I = M.unit
    gs, gt = _em_candidate(src), _em_candidate(dst)
    em = em_graded_adjunction(gm).category
    compw = _Componentwise(M, C)
    rep = LawReport(f"EM 2-cell {mm.name}")
    for d in src.objects:
        rep.check("2-cell through u^T", C, lambda d=d: (comp(d).at(I), mm.omega(d)), object=d)
        for m in M.objects():
            rep.check(
                "2-cell commutes with action",
                compw,
                lambda m=m, d=d: (comp(src.action.act_ob(m, d)), em_graded_action_mor(gm, M.identity(m), comp(d))),
                m=m, object=d,
            )
    for w in list(src.morphisms) + [D.identity(d) for d in src.objects]:
        rep.check(
            "2-cell naturality",
            compw,
            lambda w=w: (em.compose(gt.mor(Om.mor(w)), comp(D.dom(w))), em.compose(comp(D.cod(w)), gs.mor(w))),
            morphism=w,
        )
    return rep


def _kl_two_cell(mm: RightModuleMorphism, kl: KleisliCategory, comp: Callable[[Any], Any]) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    D = src.carrier
    M = src.gm.grading
    gs, gt = _kl_candidate(src), _kl_candidate(dst)
    rep = LawReport(f"Kleisli 2-cell {mm.name}")
    for x in kl.objects():
        if x.grade == M.unit:
            rep.check("2-cell through f_T", D, lambda x=x: (comp(x), mm.omega(x.obj)), object=x)
        for l in M.objects():
            rep.check("2-cell commutes with action", D, lambda l=l, x=x: (comp(kl_act_ob(kl, l, x)), src.action.whisker(l, comp(x))), m=l, object=x)
    for cls in kleisli_samples(kl):
        rep.check(
            "2-cell naturality",
            D,
            lambda cls=cls: (D.compose(Om.mor(gt.mor(cls)), comp(cls.src)), D.compose(comp(cls.dst), gs.mor(cls))),
            morphism=cls,
        )
    return rep


def _ix_two_cell(mm: IndexedModuleMorphism, comp: Callable[[Any], Any]) -> LawReport:
    src, dst, Om = mm.source, mm.target, mm.functor
    im = src.im
    B, C, D = im.index, im.base, src.carrier
    gs, gt = _ix_candidate(src), _ix_candidate(dst)
    rep = LawReport(f"indexed 2-cell {mm.name}")
    for x in src.objects:
        rep.check("2-cell through u", C, lambda x=x: (comp(x).h, mm.omega(x)), object=x)
        rep.check("2-cell over identity", B, lambda x=x: (comp(x).u, B.identity(src.index_functor.ob(x))), object=x)
        rep.check_true(
            "2-cell is a morphism",
            is_indexed_em_morphism(im, comp(x).src, comp(x).dst, comp(x).u, comp(x).h),
            object=x,
        )
    for w in src.morphisms:
        rep.check(
            "2-cell naturality",
            C,
            lambda w=w: (C.compose(gt.mor(Om.mor(w)).h, comp(D.dom(w)).h), C.compose(comp(D.cod(w)).h, gs.mor(w).h)),
            morphism=w,
        )
    return rep


def factorize_module_morphism(kind: str, mm, audit: bool = True, count: Optional[int] = None, seed: Optional[int] = None, kleisli: Optional[KleisliCategory] = None) -> TwoCellFactorization:
    """omega~ with omega~ through the forgetful side equal to omega; refuses when omega is not a module morphism."""
    if kind == "em-graded":
        _refuse(check_left_module_morphism(mm), mm.name)
        src, dst = mm.source, mm.target
        gm = src.gm
        M, C = gm.grading, gm.base
        gs, gt = _em_candidate(src), _em_candidate(dst)

        def component(d):
            return GradedAlgebraHom(gs.ob(d), gt.ob(mm.functor.ob(d)), {n: mm.omega(src.action.act_ob(n, d)) for n in M.objects()})

        report = _em_two_cell(mm, component)
        for d in src.objects:
            report.absorb(validate_graded_algebra_hom(gm, component(d)), prefix="2-cell homomorphism: ", object=d)
        out = TwoCellFactorization(kind, component, report)
        if audit:

            def perturb(rng):
                order = list(src.objects)
                rng.shuffle(order)
                for d in order:
                    phi = component(d)
                    ns = list(M.objects())
                    rng.shuffle(ns)
                    for n in ns:
                        try:
                            alts = [x for x in C.hom(C.dom(phi.at(n)), C.cod(phi.at(n))) if not C.equal(x, phi.at(n))]
                        except SizeBoundError:
                            continue
                        if alts:
                            psi = GradedAlgebraHom(phi.src, phi.dst, {**phi.components, n: rng.choice(alts)})
                            return Candidate(lambda y, d=d, psi=psi: psi if y == d else component(y), lambda y: None, note=f"component {describe(d)} at {describe(n)}")
                return None

            out.audit = uniqueness_audit(mm.name, lambda c: _em_two_cell(mm, c.ob), [perturb], count, seed)
    elif kind == "kl-graded":
        _refuse(check_right_module_morphism(mm), mm.name)
        src = mm.source
        kl = kleisli or KleisliCategory(src.gm)
        D = src.carrier

        def component(x):
            return src.action.whisker(x.grade, mm.omega(x.obj))

        report = _kl_two_cell(mm, kl, component)
        out = TwoCellFactorization(kind, component, report)
        if audit:

            def perturb(rng):
                order = kl.objects()
                rng.shuffle(order)
                for x in order:
                    value = component(x)
                    try:
                        alts = [y for y in D.hom(D.dom(value), D.cod(value)) if not D.equal(y, value)]
                    except SizeBoundError:
                        continue
                    if alts:
                        alt = rng.choice(alts)
                        return Candidate(lambda y, x=x, alt=alt: alt if y == x else component(y), lambda y: None, note=f"component {x.label()}")
                return None

            out.audit = uniqueness_audit(mm.name, lambda c: _kl_two_cell(mm, kl, c.ob), [perturb], count, seed)
    elif kind == "em-indexed":
        _refuse(check_indexed_module_morphism(mm), mm.name)
        src, dst = mm.source, mm.target
        B, C = src.im.index, src.im.base
        gs, gt = _ix_candidate(src), _ix_candidate(dst)

        def component(x):
            return IndexedEMMorphism(gs.ob(x), gt.ob(mm.functor.ob(x)), B.identity(src.index_functor.ob(x)), mm.omega(x))

        report = _ix_two_cell(mm, component)
        out = TwoCellFactorization(kind, component, report)
        if audit:

            def perturb(rng):
                order = list(src.objects)
                rng.shuffle(order)
                for x in order:
                    f = component(x)
                    try:
                        alts = [h for h in C.hom(C.dom(f.h), C.cod(f.h)) if not C.equal(h, f.h)]
                    except SizeBoundError:
                        continue
                    if alts:
                        g2 = IndexedEMMorphism(f.src, f.dst, f.u, rng.choice(alts))
                        return Candidate(lambda y, x=x, g2=g2: g2 if y == x else component(y), lambda y: None, note=f"component {describe(x)}")
                return None

            out.audit = uniqueness_audit(mm.name, lambda c: _ix_two_cell(mm, c.ob), [perturb], count, seed)
    else:
        raise SpecError(f"unknown factorization kind {kind!r}", [f"known: {', '.join(KINDS)}"])
    log.info("factorized module morphism %s (%s): %s", mm.name, kind, out.report.counts())
    return out


def identity_left_module_morphism(mod: LeftModuleData) -> LeftModuleMorphism:
    D, C = mod.carrier, mod.gm.base
    return LeftModuleMorphism(mod, mod, ComputedFunctor(D, D, lambda x: x, lambda f: f, name="Id"), lambda d: C.identity(mod.g.ob(d)), name="id")


def shift_module_morphism(adj: EMGradedAdjunction, u: Any) -> LeftModuleMorphism:
    """
    For commutative M and u: I -> p, Omega = p (*) (-) on the universal left
    module with omega_A = A(u): A_I -> A_p.
    """
    gm = adj.gm
    M = gm.grading
    if M.dom(u) != M.unit:
        raise PreconditionError(f"shift needs a morphism out of the unit, got {describe(u)}")
    p = M.cod(u)
    mod = universal_left_module(adj)
    em = adj.category
    Om = ComputedFunctor(em, em, lambda a: em_graded_action(gm, p, a), lambda phi: em_graded_action_mor(gm, M.identity(p), phi), name=f"{describe(p)}(*)-")
    return LeftModuleMorphism(mod, mod, Om, lambda a: a.mor(u), name=f"shift({describe(u)})")


# ---------- Comparison functors ----------


def em_graded_comparison(gm: GradedMonadData, res, audit: bool = True, count: Optional[int] = None, seed: Optional[int] = None) -> Factorization:
    """
    The unique k from a resolution's carrier into EM(T): k(a) = (n |-> r(n |> a),
    h_{m,n} = r(m |> eps_{n |> a})). Also checks k . l = f^T(I, -).
    """
    mod = left_module_of_resolution(gm, res)
    fac = factorize_module("em-graded", mod, audit=audit, count=count, seed=seed)
    adj = em_graded_adjunction(gm)
    l = res.adj.left
    M, C = gm.grading, gm.base
    cobs = gm.objects if gm.objects is not None else C.sample_objects()
    cmors = gm.morphisms if gm.morphisms is not None else C.sample_morphisms()
    comp = _Componentwise(M, C)
    for c in cobs:
        fac.report.check("comparison preserves free objects", VALUES, lambda c=c: (fac.ob(l.ob(c)), adj.free(M.unit, c)), object=c)
    for f in cmors:
        fac.report.check("comparison preserves free objects", comp, lambda f=f: (fac.mor(l.mor(f)), adj.free_mor(M.identity(M.unit), f)), morphism=f)
    return fac


def kl_comparison(gm: GradedMonadData, res, audit: bool = True, count: Optional[int] = None, seed: Optional[int] = None, kleisli: Optional[KleisliCategory] = None) -> Factorization:
    mod = right_module_of_resolution(gm, res)
    kl = kleisli or KleisliCategory(gm)
    fac = factorize_module("kl-graded", mod, audit=audit, count=count, seed=seed, kleisli=kl)
    adj = kl_adjunction(gm, kl)
    r = res.adj.right
    C = gm.base
    for x in kl.objects():
        fac.report.check("comparison preserves forgetful", VALUES, lambda x=x: (r.ob(fac.ob(x)), adj.forget(x)), object=x)
    for cls in kleisli_samples(kl):
        fac.report.check("comparison preserves forgetful", C, lambda cls=cls: (r.mor(fac.mor(cls)), adj.forget_mor(cls)), morphism=cls)
    return fac


def em_indexed_comparison(im: IndexedMonadData, adj, audit: bool = True, count: Optional[int] = None, seed: Optional[int] = None) -> Factorization:
    mod = indexed_module_of_adjunction(im, adj)
    return factorize_module("em-indexed", mod, audit=audit, count=count, seed=seed)
