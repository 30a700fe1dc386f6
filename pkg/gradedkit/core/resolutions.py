from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

from gradedkit.core.em_graded import em_graded_adjunction
from gradedkit.core.errors import PreconditionError
from gradedkit.core.fincat import Category
from gradedkit.core.functors import ComputedFunctor, Functor
from gradedkit.core.graded import (
    AdjunctionData,
    GradedMonadData,
    LaxActionData,
    StrictActionData,
    check_adjunction,
    check_strict_action,
    compare_lax_actions,
    transport_lax_action,
)
from gradedkit.core.kleisli import KleisliCategory, kl_adjunction
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.universality import Factorization, em_graded_comparison, kl_comparison, kleisli_samples

log = logging.getLogger(__name__)


@dataclass
class ResolutionData:
    strict: StrictActionData
    adj: AdjunctionData
    name: str = "rho"

    @property
    def carrier(self) -> Category:
        return self.adj.carrier

    @property
    def base(self) -> Category:
        return self.adj.base


@dataclass
class ResolutionMorphism:
    source: ResolutionData
    target: ResolutionData
    functor: Functor
    name: str = "k"
    factorization: Optional[Factorization] = None


def _as_monad(target: Union[GradedMonadData, LaxActionData]) -> GradedMonadData:
    return target.as_graded_monad() if isinstance(target, LaxActionData) else target


def _carrier_samples(res: ResolutionData):
    A = res.carrier
    return list(A.sample_objects()), list(A.sample_morphisms())


def validate_resolution(res: ResolutionData, target: Union[GradedMonadData, LaxActionData], objects=None) -> LawReport:
    gm = _as_monad(target)
    C = gm.base
    cobs = list(objects if objects is not None else (gm.objects if gm.objects is not None else C.sample_objects()))
    aobs, amors = _carrier_samples(res)
    rep = LawReport(f"resolution {res.name} of {gm.name}")
    rep.merge(check_strict_action(res.strict, aobs, amors))
    tri = check_adjunction(res.adj, cobs, aobs)
    rep.merge(tri)
    if not tri.passed:
        log.warning("resolution %s: adjunction fails, transport not attempted", res.name)
        return rep
    transported = transport_lax_action(res.strict, res.adj, cobs, aobs).as_graded_monad()
    rep.merge(compare_lax_actions(transported, gm, cobs, gm.morphisms), prefix="transport ")
    log.info("validated resolution %s: %s", res.name, rep.counts())
    return rep


def em_resolution(gm: GradedMonadData) -> ResolutionData:
    adj = em_graded_adjunction(gm)
    return ResolutionData(adj.strict_action(), adj.as_adjunction(), name=f"EM-res({gm.name})")


def kl_resolution(gm: GradedMonadData, kleisli: Optional[KleisliCategory] = None) -> ResolutionData:
    adj = kl_adjunction(gm, kleisli)
    return ResolutionData(adj.strict_action(), adj.as_adjunction(), name=f"Kl-res({gm.name})")


def check_resolution_morphism(k: ResolutionMorphism, objects=None) -> LawReport:
    src, dst = k.source, k.target
    A, A2 = src.carrier, dst.carrier
    M = src.strict.grading
    C = src.base
    F = k.functor
    aobs, amors = _carrier_samples(src)
    cobs = list(objects if objects is not None else C.sample_objects())
    cmors = list(C.sample_morphisms())
    l, r, l2, r2 = src.adj.left, src.adj.right, dst.adj.left, dst.adj.right
    rep = LawReport(f"resolution morphism {k.name}")
    for m in M.objects():
        for a in aobs:
            rep.check(
                "commutes with action",
                VALUES,
                lambda m=m, a=a: (F.ob(src.strict.act_ob(m, a)), dst.strict.act_ob(m, F.ob(a))),
                m=m, object=A.label_object(a),
            )
    for u in M.morphisms():
        for w in amors:
            rep.check(
                "commutes with action",
                A2,
                lambda u=u, w=w: (F.mor(src.strict.act_mor(u, w)), dst.strict.act_mor(u, F.mor(w))),
                u=u, morphism=A.label_morphism(w),
            )
    for c in cobs:
        rep.check("left adjoints", VALUES, lambda c=c: (F.ob(l.ob(c)), l2.ob(c)), object=c)
    for f in cmors:
        rep.check("left adjoints", A2, lambda f=f: (F.mor(l.mor(f)), l2.mor(f)), morphism=f)
    for a in aobs:
        rep.check("right adjoints", VALUES, lambda a=a: (r.ob(a), r2.ob(F.ob(a))), object=A.label_object(a))
    for w in amors:
        rep.check("right adjoints", C, lambda w=w: (r.mor(w), r2.mor(F.mor(w))), morphism=A.label_morphism(w))
    return rep


@dataclass
class ResolutionWitnesses:
    initial: ResolutionMorphism
    terminal: ResolutionMorphism
    report: LawReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def terminal_initial_witness(
    res: ResolutionData,
    gm: GradedMonadData,
    audit: bool = True,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> ResolutionWitnesses:
    """
    The unique morphisms Kl-res -> res and res -> EM-res, each checked as a
    resolution morphism and audited for uniqueness; their composite must equal
    the direct comparison Kl-res -> EM-res.
    """
    pre = validate_resolution(res, gm)
    if not pre.passed:
        first = pre.first_failure()
        raise PreconditionError(f"{res.name} is not a resolution of {gm.name}: {first.axiom if first else '?'}", pre)
    kl = KleisliCategory(gm)
    kl_res = kl_resolution(gm, kl)
    em_res = em_resolution(gm)

    to_em = em_graded_comparison(gm, res, audit=audit, count=count, seed=seed)
    from_kl = kl_comparison(gm, res, audit=audit, count=count, seed=seed, kleisli=kl)
    terminal = ResolutionMorphism(
        res, em_res, ComputedFunctor(res.carrier, em_res.carrier, to_em.ob, to_em.mor, name="k_EM"), name=f"{res.name}->EM", factorization=to_em
    )
    initial = ResolutionMorphism(
        kl_res, res, ComputedFunctor(kl, res.carrier, from_kl.ob, from_kl.mor, name="k_Kl"), name=f"Kl->{res.name}", factorization=from_kl
    )

    rep = LawReport(f"witnesses for {res.name}")
    for fac, mor, tag in ((to_em, terminal, "terminal"), (from_kl, initial, "initial")):
        rep.merge(fac.report, prefix=f"{tag} ")
        if fac.audit is not None:
            rep.merge(fac.audit, prefix=f"{tag} ")
        rep.merge(check_resolution_morphism(mor), prefix=f"{tag} ")

    direct = kl_comparison(gm, em_res, audit=False, kleisli=kl)
    EM = em_res.carrier
    for x in kl.objects():
        rep.check("composite equals direct", VALUES, lambda x=x: (to_em.ob(from_kl.ob(x)), direct.ob(x)), object=x)
    for cls in kleisli_samples(kl):
        rep.check("composite equals direct", EM, lambda cls=cls: (to_em.mor(from_kl.mor(cls)), direct.mor(cls)), morphism=cls)
    log.info("resolution witnesses for %s: %s", res.name, rep.counts())
    return ResolutionWitnesses(initial, terminal, rep)


def resolve(gm: GradedMonadData, audit: bool = True) -> Tuple[ResolutionData, ResolutionData, LawReport]:
    em_res, kl_res = em_resolution(gm), kl_resolution(gm)
    rep = LawReport(f"resolutions of {gm.name}")
    rep.merge(validate_resolution(em_res, gm), prefix="EM: ")
    rep.merge(validate_resolution(kl_res, gm), prefix="Kl: ")
    if rep.passed:
        rep.merge(terminal_initial_witness(kl_res, gm, audit=audit).report, prefix="Kl: ")
    return em_res, kl_res, rep
