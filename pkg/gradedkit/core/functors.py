from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import CompositionError, SizeBoundError, TypingError
from gradedkit.core.fincat import Category, FiniteCategory
from gradedkit.core.reports import LawReport
from gradedkit.core.search import Constraint, Variable, solve
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)


class Functor(ABC):
    src: Category
    dst: Category
    name: str = "F"

    @abstractmethod
    def ob(self, x: Any) -> Any: ...

    @abstractmethod
    def mor(self, f: Any) -> Any: ...

    def __call__(self, x: Any) -> Any:
        return self.ob(x)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}: {self.src.name} -> {self.dst.name})"


class FunctorTable(Functor):
    def __init__(self, src: Category, dst: Category, ob_map: Dict[Any, Any], mor_map: Dict[Any, Any], name: str = "F"):
        self.src, self.dst, self.name = src, dst, name
        self.ob_map = dict(ob_map)
        self.mor_map = dict(mor_map)

    def ob(self, x):
        try:
            return self.ob_map[x]
        except KeyError:
            raise TypingError(f"functor {self.name} undefined on object {describe(x)}") from None

    def mor(self, f):
        try:
            return self.mor_map[f]
        except KeyError:
            raise TypingError(f"functor {self.name} undefined on morphism {describe(f)}") from None

    def key(self) -> Tuple:
        return (
            tuple(sorted((describe(k), describe(v)) for k, v in self.ob_map.items())),
            tuple(sorted((describe(k), describe(v)) for k, v in self.mor_map.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FunctorTable) and self.ob_map == other.ob_map and self.mor_map == other.mor_map

    def __hash__(self) -> int:
        return hash(self.key())

    def label(self) -> str:
        return self.name


class ComputedFunctor(Functor):
    def __init__(self, src: Category, dst: Category, ob_fn: Callable[[Any], Any], mor_fn: Callable[[Any], Any], name: str = "F"):
        self.src, self.dst, self.name = src, dst, name
        self._ob = ob_fn
        self._mor = mor_fn

    def ob(self, x):
        return self._ob(x)

    def mor(self, f):
        return self._mor(f)


def identity_functor(cat: Category) -> Functor:
    return ComputedFunctor(cat, cat, lambda x: x, lambda f: f, name=f"Id_{cat.name}")


def compose_functors(g: Functor, f: Functor) -> Functor:
    return ComputedFunctor(f.src, g.dst, lambda x: g.ob(f.ob(x)), lambda m: g.mor(f.mor(m)), name=f"{g.name}.{f.name}")


class NatTrans(ABC):
    dom: Functor
    cod: Functor
    name: str = "alpha"

    @abstractmethod
    def at(self, x: Any) -> Any: ...

    def __call__(self, x: Any) -> Any:
        return self.at(x)


class NatTransTable(NatTrans):
    def __init__(self, dom: Functor, cod: Functor, components: Dict[Any, Any], name: str = "alpha"):
        self.dom, self.cod, self.name = dom, cod, name
        self.components = dict(components)

    def at(self, x):
        try:
            return self.components[x]
        except KeyError:
            raise TypingError(f"{self.name} has no component at {describe(x)}") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NatTransTable) and self.components == other.components

    def __hash__(self) -> int:
        return hash(tuple(sorted((describe(k), describe(v)) for k, v in self.components.items())))


class ComputedNatTrans(NatTrans):
    def __init__(self, dom: Functor, cod: Functor, fn: Callable[[Any], Any], name: str = "alpha"):
        self.dom, self.cod, self.name = dom, cod, name
        self._fn = fn

    def at(self, x):
        return self._fn(x)


# ---------- Pasting ----------


def identity_nat(f: Functor) -> NatTrans:
    return ComputedNatTrans(f, f, lambda x: f.dst.identity(f.ob(x)), name=f"id_{f.name}")


def vcomp(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    cat = alpha.dom.dst
    return ComputedNatTrans(alpha.dom, beta.cod, lambda x: cat.compose(beta.at(x), alpha.at(x)), name=f"{beta.name}.{alpha.name}")


def whisker_left(g: Functor, alpha: NatTrans) -> NatTrans:
    return ComputedNatTrans(compose_functors(g, alpha.dom), compose_functors(g, alpha.cod), lambda x: g.mor(alpha.at(x)), name=f"{g.name}*{alpha.name}")


def whisker_right(beta: NatTrans, f: Functor) -> NatTrans:
    return ComputedNatTrans(compose_functors(beta.dom, f), compose_functors(beta.cod, f), lambda x: beta.at(f.ob(x)), name=f"{beta.name}*{f.name}")


def hcomp(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """
    Horizontal composite of alpha: F => F' and beta: G => G'.
    (beta * alpha)_x = beta_{F' x} . G(alpha_x) : G F x -> G' F' x
    """
    g = beta.dom
    cat = g.dst

    def at(x):
        return cat.compose(beta.at(alpha.cod.ob(x)), g.mor(alpha.at(x)))

    return ComputedNatTrans(compose_functors(beta.dom, alpha.dom), compose_functors(beta.cod, alpha.cod), at, name=f"{beta.name}*{alpha.name}")


# ---------- Validation ----------


def validate_functor(f: Functor, objects: Optional[Iterable[Any]] = None, morphisms: Optional[Iterable[Any]] = None) -> LawReport:
    src, dst = f.src, f.dst
    obs = list(src.sample_objects() if objects is None else objects)
    mors = list(src.sample_morphisms() if morphisms is None else morphisms)
    rep = LawReport(f"functor {f.name}")

    typed = True
    for m in mors:
        try:
            fm = f.mor(m)
            ok = dst.dom(fm) == f.ob(src.dom(m)) and dst.cod(fm) == f.ob(src.cod(m))
        except (TypingError, CompositionError) as e:
            rep.fail("typing", morphism=m, reason=str(e))
            typed = False
            continue
        typed &= rep.check_true("typing", ok, morphism=m)
    if not typed:
        return rep

    for x in obs:
        rep.check("identity preservation", dst, lambda x=x: (f.mor(src.identity(x)), dst.identity(f.ob(x))), object=x)

    by_dom: Dict[Any, List[Any]] = {}
    for m in mors:
        by_dom.setdefault(src.dom(m), []).append(m)
    for m in mors:
        for g in by_dom.get(src.cod(m), []):
            rep.check(
                "composition preservation",
                dst,
                lambda g=g, m=m: (f.mor(src.compose(g, m)), dst.compose(f.mor(g), f.mor(m))),
                pair=(g, m),
            )
    return rep


def validate_nat_trans(alpha: NatTrans, objects: Optional[Iterable[Any]] = None, morphisms: Optional[Iterable[Any]] = None) -> LawReport:
    F, G = alpha.dom, alpha.cod
    src, dst = F.src, F.dst
    obs = list(src.sample_objects() if objects is None else objects)
    mors = list(src.sample_morphisms() if morphisms is None else morphisms)
    rep = LawReport(f"natural transformation {alpha.name}")

    typed = True
    for x in obs:
        try:
            a = alpha.at(x)
            ok = dst.dom(a) == F.ob(x) and dst.cod(a) == G.ob(x)
        except (TypingError, CompositionError) as e:
            rep.fail("typing", object=x, reason=str(e))
            typed = False
            continue
        typed &= rep.check_true("typing", ok, object=x)
    if not typed:
        return rep

    for m in mors:
        x, y = src.dom(m), src.cod(m)
        rep.check(
            "naturality",
            dst,
            lambda m=m, x=x, y=y: (dst.compose(G.mor(m), alpha.at(x)), dst.compose(alpha.at(y), F.mor(m))),
            morphism=m,
        )
    return rep


# ---------- Functor categories ----------


def enumerate_functors(src: Category, dst: Category, extra: Sequence[Constraint] = (), fixed: Optional[Dict[Any, Any]] = None) -> List[FunctorTable]:
    """
    All functors src -> dst (src enumerable, finite). `fixed` pins object images;
    `extra` adds constraints over variables named ("ob", x) / ("mor", f).
    """
    obs = src.objects()
    mors = src.morphisms()
    non_id = [m for m in mors if not src.is_identity(m)]
    fixed = fixed or {}

    variables = [
        Variable(("ob", x), (lambda a, x=x: [fixed[x]] if x in fixed else dst.objects()))
        for x in obs
    ]
    for m in non_id:
        variables.append(Variable(("mor", m), (lambda a, m=m: dst.hom(a[("ob", src.dom(m))], a[("ob", src.cod(m))]))))

    def image(a, m):
        if src.is_identity(m):
            return dst.identity(a[("ob", src.dom(m))])
        return a[("mor", m)]

    def needed(m):
        return (("ob", src.dom(m)),) if src.is_identity(m) else (("mor", m),)

    constraints: List[Constraint] = list(extra)
    for f in non_id:
        for g in non_id:
            if src.cod(f) != src.dom(g):
                continue
            gf = src.compose(g, f)
            vs = tuple(dict.fromkeys(needed(f) + needed(g) + needed(gf)))
            constraints.append(
                Constraint(
                    f"functoriality {describe(g)}.{describe(f)}",
                    vs,
                    lambda a, f=f, g=g, gf=gf: dst.equal(image(a, gf), dst.compose(image(a, g), image(a, f))),
                )
            )

    out = []
    for i, sol in enumerate(solve(variables, constraints)):
        ob_map = {x: sol[("ob", x)] for x in obs}
        mor_map = {m: image(sol, m) for m in mors}
        out.append(FunctorTable(src, dst, ob_map, mor_map, name=f"F{i}"))
    return out


def enumerate_nat_trans(f: FunctorTable, g: FunctorTable, extra: Sequence[Constraint] = ()) -> List[NatTransTable]:
    src, dst = f.src, f.dst
    obs = src.objects()
    variables = [Variable(("at", x), (lambda a, x=x: dst.hom(f.ob(x), g.ob(x)))) for x in obs]
    constraints = list(extra)
    for m in src.morphisms():
        x, y = src.dom(m), src.cod(m)
        constraints.append(
            Constraint(
                f"naturality {describe(m)}",
                tuple(dict.fromkeys((("at", x), ("at", y)))),
                lambda a, m=m, x=x, y=y: dst.equal(dst.compose(g.mor(m), a[("at", x)]), dst.compose(a[("at", y)], f.mor(m))),
            )
        )
    return [NatTransTable(f, g, {x: sol[("at", x)] for x in obs}, name=f"{f.name}=>{g.name}") for sol in solve(variables, constraints)]


def functor_category(src: Category, dst: Category, max_morphisms: Optional[int] = None) -> FiniteCategory:
    bound = max_morphisms if max_morphisms is not None else active_config().max_morphisms
    estimate = len(dst.objects()) ** max(1, len(src.morphisms()))
    if estimate > bound:
        raise SizeBoundError(
            f"functor category [{src.name}, {dst.name}] may have {estimate} objects, bound is {bound}"
        )
    functors = enumerate_functors(src, dst)
    obs = [fn.name for fn in functors]
    origin: Dict[str, Any] = {fn.name: fn for fn in functors}
    mors: Dict[str, Tuple[str, str]] = {}
    by_key: Dict[Tuple[str, str, Tuple], str] = {}
    ids: Dict[str, str] = {}

    def comps(t: NatTransTable) -> Tuple:
        return tuple(t.components[x] for x in src.objects())

    for f in functors:
        for g in functors:
            for t in enumerate_nat_trans(f, g):
                mid = f"n{len(mors)}"
                t.name = mid
                mors[mid] = (f.name, g.name)
                origin[mid] = t
                by_key[(f.name, g.name, comps(t))] = mid
                if f is g and all(dst.is_identity(c) for c in t.components.values()):
                    ids[f.name] = mid
            if len(mors) > bound:
                raise SizeBoundError(f"functor category exceeds {bound} morphisms")

    comp: Dict[Tuple[str, str], str] = {}
    for m1, (a, b) in mors.items():
        for m2, (b2, c) in mors.items():
            if b2 != b:
                continue
            t1, t2 = origin[m1], origin[m2]
            composite = tuple(dst.compose(t2.components[x], t1.components[x]) for x in src.objects())
            comp[(m2, m1)] = by_key[(a, c, composite)]
    log.info("functor category [%s, %s]: %d functors, %d transformations", src.name, dst.name, len(obs), len(mors))
    return FiniteCategory(f"[{src.name},{dst.name}]", obs, mors, ids, comp, origin)
