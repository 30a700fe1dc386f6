from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import CompositionError, PreconditionError, SizeBoundError, TypingError
from gradedkit.core.fincat import Category, category_law_errors, tabulate
from gradedkit.core.functors import ComputedFunctor
from gradedkit.core.graded import AdjunctionData, GradedMonadData, StrictActionData
from gradedkit.core.indexed import MonadData
from gradedkit.core.reports import LawReport
from gradedkit.core.union_find import UnionFind
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)

Triple = Tuple[Any, Any, Any]


@dataclass(frozen=True)
class KleisliObject:
    grade: Any
    obj: Any

    def label(self) -> str:
        return f"({describe(self.grade)},{describe(self.obj)})"


@dataclass(frozen=True)
class KleisliMorphismClass:
    src: KleisliObject
    dst: KleisliObject
    rep: Triple
    members: Tuple[Triple, ...] = field(default=(), compare=False, hash=False, repr=False)

    def label(self) -> str:
        n, v, f = self.rep
        return f"[{describe(n)},{describe(v)},{describe(f)}]"


@dataclass
class _Hom:
    classes: List[KleisliMorphismClass]
    index: Dict[Hashable, KleisliMorphismClass]
    raw: int


class KleisliCategory(Category):
    def __init__(self, gm: GradedMonadData, objects: Optional[List[Any]] = None, max_morphisms: Optional[int] = None):
        if gm.grading.partial:
            raise PreconditionError(f"the Kleisli construction needs a total tensor; {gm.grading.name} is partial")
        self.gm = gm
        self.name = f"Kl({gm.name})"
        M, C = gm.grading, gm.base
        cobs = list(objects if objects is not None else (gm.objects if gm.objects is not None else C.sample_objects()))
        self._objects = [KleisliObject(m, c) for m in M.objects() for c in cobs]
        self.bound = max_morphisms if max_morphisms is not None else active_config().max_morphisms
        self._homs: Dict[Tuple[KleisliObject, KleisliObject], _Hom] = {}
        self._grade_pos = {m: i for i, m in enumerate(M.objects())}

    # ---------- triples and classes ----------

    def triple_key(self, t: Triple) -> Tuple:
        n, v, f = t
        M, C = self.gm.grading, self.gm.base
        return (self._grade_pos[n], M.sort_key(v), C.sort_key(f))

    def raw_triples(self, a: KleisliObject, b: KleisliObject) -> List[Triple]:
        M, C, gm = self.gm.grading, self.gm.base, self.gm
        out = []
        for n in M.objects():
            vs = M.hom(M.tensor_ob(a.grade, n), b.grade)
            if not vs:
                continue
            fs = C.hom(a.obj, gm.T_ob(n, b.obj))
            if len(out) + len(vs) * len(fs) > self.bound:
                raise SizeBoundError(f"{self.name}: raw triples {a.label()} -> {b.label()} exceed {self.bound}")
            out.extend((n, v, f) for v in vs for f in fs)
        return out

    def _build_hom(self, a: KleisliObject, b: KleisliObject) -> _Hom:
        M, C, gm = self.gm.grading, self.gm.base, self.gm
        raw = self.raw_triples(a, b)
        uf = UnionFind(raw)
        m, c2 = a.grade, b.obj
        non_identity = [w for w in M.morphisms() if not M.is_identity(w)]
        for n, f in dict.fromkeys((n, f) for n, _, f in raw):
            for w in non_identity:
                if M.dom(w) != n:
                    continue
                n2 = M.cod(w)
                mw = M.tensor_mor(M.identity(m), w)
                moved = C.compose(gm.T_u(w, c2), f)
                for v in M.hom(M.tensor_ob(m, n2), b.grade):
                    left = (n, M.compose(v, mw), f)
                    right = (n2, v, moved)
                    # both orientations: the coend quotients by the generated equivalence
                    uf.union(left, right)
        classes: List[KleisliMorphismClass] = []
        index: Dict[Hashable, KleisliMorphismClass] = {}
        for members in uf.classes().values():
            ordered = tuple(sorted(members, key=self.triple_key))
            cls = KleisliMorphismClass(a, b, ordered[0], ordered)
            classes.append(cls)
            for t in ordered:
                index[t] = cls
        classes.sort(key=lambda k: self.triple_key(k.rep))
        return _Hom(classes, index, len(raw))

    def _hom(self, a: KleisliObject, b: KleisliObject) -> _Hom:
        key = (a, b)
        if key not in self._homs:
            self._homs[key] = self._build_hom(a, b)
        return self._homs[key]

    def class_of(self, a: KleisliObject, b: KleisliObject, t: Triple) -> KleisliMorphismClass:
        try:
            return self._hom(a, b).index[t]
        except KeyError:
            raise TypingError(f"{self.name}: {describe(t)} is not a triple {a.label()} -> {b.label()}") from None

    # ---------- category structure ----------

    def objects(self):
        return list(self._objects)

    def hom(self, a, b):
        return list(self._hom(a, b).classes)

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def identity(self, a):
        M, gm = self.gm.grading, self.gm
        return self.class_of(a, a, (M.unit, M.identity(a.grade), gm.eta(a.obj)))

    def compose_triples(self, g: Triple, f: Triple, c2: Any) -> Triple:
        M, C, gm = self.gm.grading, self.gm.base, self.gm
        n, v, f0 = f
        n2, v2, g0 = g
        return (
            M.tensor_ob(n, n2),
            M.compose(v2, M.tensor_mor(v, M.identity(n2))),
            C.compose_all(gm.mu(n, n2, c2), gm.T_mor(n, g0), f0),
        )

    def compose(self, g, f):
        if f.dst != g.src:
            raise CompositionError(f"{self.name}: cannot compose {g.label()} after {f.label()}")
        return self.class_of(f.src, g.dst, self.compose_triples(g.rep, f.rep, g.dst.obj))

    def sort_key(self, f):
        return (f.src.label(), f.dst.label(), self.triple_key(f.rep))

    def label_object(self, x):
        return x.label()

    def label_morphism(self, f):
        return f.label()


def kl_build(gm: GradedMonadData, bound: Optional[int] = None, objects=None) -> KleisliCategory:
    kl = KleisliCategory(gm, objects, bound)
    total = 0
    for a in kl.objects():
        for b in kl.objects():
            total += len(kl.hom(a, b))
    log.info("%s: %d objects, %d morphism classes", kl.name, len(kl.objects()), total)
    return kl


def kl_act_ob(kl: KleisliCategory, l: Any, x: KleisliObject) -> KleisliObject:
    return KleisliObject(kl.gm.grading.tensor_ob(l, x.grade), x.obj)


def kl_action(kl: KleisliCategory, u: Any, cls: KleisliMorphismClass) -> KleisliMorphismClass:
    M = kl.gm.grading
    n, v, f = cls.rep
    src = kl_act_ob(kl, M.dom(u), cls.src)
    dst = kl_act_ob(kl, M.cod(u), cls.dst)
    return kl.class_of(src, dst, (n, M.tensor_mor(u, v), f))


def kl_strict_action(kl: KleisliCategory) -> StrictActionData:
    return StrictActionData(kl.gm.grading, kl, lambda l, x: kl_act_ob(kl, l, x), lambda u, cls: kl_action(kl, u, cls), name="(.)")


# ---------- Adjunction ----------


@dataclass
class KleisliAdjunction:
    gm: GradedMonadData
    category: KleisliCategory

    def free(self, c: Any) -> KleisliObject:
        return KleisliObject(self.gm.grading.unit, c)

    def free_mor(self, f: Any) -> KleisliMorphismClass:
        M, C, gm = self.gm.grading, self.gm.base, self.gm
        I = M.unit
        c2 = C.cod(f)
        return self.category.class_of(self.free(C.dom(f)), self.free(c2), (I, M.identity(I), C.compose(gm.eta(c2), f)))

    def forget(self, x: KleisliObject) -> Any:
        return self.gm.T_ob(x.grade, x.obj)

    def forget_mor(self, cls: KleisliMorphismClass) -> Any:
        """u_T [n, v, f] = T_v . mu_{m,n} . (m * f): m * c -> m' * c'"""
        C, gm = self.gm.base, self.gm
        n, v, f = cls.rep
        m, c2 = cls.src.grade, cls.dst.obj
        return C.compose_all(gm.T_u(v, c2), gm.mu(m, n, c2), gm.T_mor(m, f))

    def unit(self, c: Any) -> Any:
        return self.gm.eta(c)

    def counit(self, x: KleisliObject) -> KleisliMorphismClass:
        M, C = self.gm.grading, self.gm.base
        m = x.grade
        mc = self.gm.T_ob(m, x.obj)
        return self.category.class_of(self.free(mc), x, (m, M.identity(m), C.identity(mc)))

    def as_adjunction(self) -> AdjunctionData:
        kl = self.category
        left = ComputedFunctor(self.gm.base, kl, self.free, self.free_mor, name="f_T")
        right = ComputedFunctor(kl, self.gm.base, self.forget, self.forget_mor, name="u_T")
        return AdjunctionData(left, right, self.unit, self.counit, name=f"f_T-|u_T({self.gm.name})")

    def strict_action(self) -> StrictActionData:
        return kl_strict_action(self.category)


def kl_adjunction(gm: GradedMonadData, category: Optional[KleisliCategory] = None) -> KleisliAdjunction:
    return KleisliAdjunction(gm, category or KleisliCategory(gm))


# ---------- Decomposition and checks ----------


def kl_decompose(kl: KleisliCategory, cls: KleisliMorphismClass) -> Tuple[KleisliMorphismClass, KleisliMorphismClass, KleisliMorphismClass]:
    """
    [n, v, f] = (v (.) f_T(c')) . (m (.) eps_T(n, c')) . (m (.) f_T(f)),
    through (m, n * c') and (m(x)n, c').
    """
    adj = kl_adjunction(kl.gm, kl)
    M = kl.gm.grading
    n, v, f = cls.rep
    m, c2 = cls.src.grade, cls.dst.obj
    first = kl_action(kl, M.identity(m), adj.free_mor(f))
    second = kl_action(kl, M.identity(m), adj.counit(KleisliObject(n, c2)))
    third = kl_action(kl, v, kl.identity(adj.free(c2)))
    return first, second, third


def check_kl_decomposition(kl: KleisliCategory) -> LawReport:
    rep = LawReport(f"decomposition in {kl.name}")
    for a in kl.objects():
        for b in kl.objects():
            for cls in kl.hom(a, b):
                rep.check(
                    "decomposition",
                    kl,
                    lambda cls=cls: (kl.compose_all(*reversed(kl_decompose(kl, cls))), cls),
                    morphism=cls,
                )
    return rep


def check_kleisli(kl: KleisliCategory, audit_pairs: bool = True) -> LawReport:
    rep = LawReport(f"Kleisli {kl.name}")
    fc, _, _ = tabulate(kl, max_morphisms=kl.bound)
    for problem in category_law_errors(fc):
        rep.fail("category laws", reason=problem)
    if not any(e.axiom == "category laws" for e in rep.entries):
        rep.ok("category laws", objects=len(fc.objects()), morphisms=len(fc.morphisms()))

    adj = kl_adjunction(kl.gm, kl)
    C, M = kl.gm.base, kl.gm.grading
    obs = kl.objects()
    for a in obs:
        for b in obs:
            for cls in kl.hom(a, b):
                for t in cls.members:
                    probe = KleisliMorphismClass(a, b, t)
                    rep.check("u_T well-defined", C, lambda probe=probe, cls=cls: (adj.forget_mor(probe), adj.forget_mor(cls)), morphism=cls, member=t)
                    for u in M.morphisms():
                        rep.check(
                            "action well-defined",
                            VALUES_KL,
                            lambda u=u, probe=probe, cls=cls: (kl_action(kl, u, probe), kl_action(kl, u, cls)),
                            u=u, member=t,
                        )
    if audit_pairs:
        for a in obs:
            for b in obs:
                for f in kl.hom(a, b):
                    for c in obs:
                        for g in kl.hom(b, c):
                            expected = kl.compose(g, f)
                            for t in f.members:
                                rep.check(
                                    "composition well-defined",
                                    VALUES_KL,
                                    lambda t=t, g=g, c=c: (kl.class_of(a, c, kl.compose_triples(g.rep, t, c.obj)), expected),
                                    pair=(g, f), member=t,
                                )
                            for t in g.members:
                                rep.check(
                                    "composition well-defined",
                                    VALUES_KL,
                                    lambda t=t, f=f, c=c: (kl.class_of(a, c, kl.compose_triples(t, f.rep, c.obj)), expected),
                                    pair=(g, f), member=t,
                                )
    log.info("checked %s: %s", kl.name, rep.counts())
    return rep


class _ClassEquality:
    name = "classes"

    def equal(self, a, b):
        return a == b

    def witness(self, a, b):
        return f"{a.label()} vs {b.label()}"


VALUES_KL = _ClassEquality()


def kleisli_hom_count_oracle(t: MonadData, objects=None) -> Dict[Tuple[Any, Any], int]:
    C = t.base
    obs = list(C.sample_objects() if objects is None else objects)
    return {(c, c2): len(C.hom(c, t.T_ob(c2))) for c in obs for c2 in obs}


def kl_hom_counts(kl: KleisliCategory) -> Dict[Tuple[Any, Any], int]:
    return {(a, b): len(kl.hom(a, b)) for a in kl.objects() for b in kl.objects()}
