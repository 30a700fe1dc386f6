from __future__ import annotations

import logging
from typing import Any, Dict, Iterable, List, Optional, Tuple

from gradedkit.core.errors import OffGridError, SpecError, TypingError
from gradedkit.core.fincat import Category, FiniteCategory, ProductCategory, discrete_category, terminal_category, validate_category
from gradedkit.core.functors import ComputedFunctor, Functor
from gradedkit.core.reports import VALUES, LawReport
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)


class MonoidalCategory(Category):
    base: Category
    unit: Any
    partial: bool = False

    def tensor_ob(self, m: Any, n: Any) -> Any:
        raise NotImplementedError

    def tensor_mor(self, u: Any, v: Any) -> Any:
        raise NotImplementedError

    def tensor_all(self, *ms: Any) -> Any:
        out = ms[0]
        for m in ms[1:]:
            out = self.tensor_ob(out, m)
        return out

    def tensor_functor(self) -> Functor:
        return ComputedFunctor(
            ProductCategory(self.base, self.base),
            self.base,
            lambda x: self.tensor_ob(x[0], x[1]),
            lambda f: self.tensor_mor(f[0], f[1]),
            name="tensor",
        )

    # delegation to the underlying category

    @property
    def enumerable(self) -> bool:  # type: ignore[override]
        return self.base.enumerable

    def objects(self):
        return self.base.objects()

    def hom(self, a, b):
        return self.base.hom(a, b)

    def morphisms(self):
        return self.base.morphisms()

    def dom(self, f):
        return self.base.dom(f)

    def cod(self, f):
        return self.base.cod(f)

    def identity(self, a):
        return self.base.identity(a)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def equal(self, f, g):
        return self.base.equal(f, g)

    def witness(self, f, g):
        return self.base.witness(f, g)

    def sort_key(self, f):
        return self.base.sort_key(f)

    def label_object(self, x):
        return self.base.label_object(x)

    def label_morphism(self, f):
        return self.base.label_morphism(f)

    def is_identity(self, f):
        return self.base.is_identity(f)


class StrictMonoidalCategory(MonoidalCategory):
    def __init__(
        self,
        base: FiniteCategory,
        tensor_ob: Dict[Tuple[str, str], str],
        tensor_mor: Dict[Tuple[str, str], str],
        unit: str,
        name: Optional[str] = None,
    ):
        self.base = base
        self.name = name or base.name
        self.unit = unit
        self._tob = dict(tensor_ob)
        self._tmor = dict(tensor_mor)

    def _missing(self, what: str, key: Tuple[Any, Any]):
        raise TypingError(f"{self.name}: tensor undefined on {what} ({describe(key[0])}, {describe(key[1])})")

    def tensor_ob(self, m, n):
        try:
            return self._tob[(m, n)]
        except KeyError:
            self._missing("objects", (m, n))

    def tensor_mor(self, u, v):
        try:
            return self._tmor[(u, v)]
        except KeyError:
            self._missing("morphisms", (u, v))

    def tables(self) -> Dict[str, Any]:
        return {
            "tensor_ob": sorted([m, n, r] for (m, n), r in self._tob.items()),
            "tensor_mor": sorted([u, v, r] for (u, v), r in self._tmor.items()),
            "unit": self.unit,
            "partial": self.partial,
        }


class PartialMonoidalCategory(StrictMonoidalCategory):
    partial = True

    def _missing(self, what, key):
        raise OffGridError(f"{self.name}: ({describe(key[0])}, {describe(key[1])}) is off the tensor grid")


def monoidal_from_tables(base: FiniteCategory, raw: Dict[str, Any]) -> StrictMonoidalCategory:
    """
    Read the `monoidal` block of a category spec: `tensor_ob` and `tensor_mor` as
    [left, right, result] rows, `unit`, optional `partial`. Tensors of identities
    may be omitted.
    """
    errors: List[str] = []
    unknown = sorted(set(raw) - {"tensor_ob", "tensor_mor", "unit", "partial"})
    if unknown:
        errors.append(f"unknown monoidal keys {unknown}")
    unit = raw.get("unit")
    if not base.has_object(unit):
        errors.append(f"unit {unit!r} is not an object")

    def rows(key: str, known) -> Dict[Tuple[str, str], str]:
        out: Dict[Tuple[str, str], str] = {}
        for row in raw.get(key, []):
            if not isinstance(row, list) or len(row) != 3:
                errors.append(f"{key} row must be [left, right, result]: {row!r}")
                continue
            a, b, r = row
            if not (known(a) and known(b) and known(r)):
                errors.append(f"{key} row mentions unknown identifiers {row!r}")
                continue
            out[(a, b)] = r
        return out

    tob = rows("tensor_ob", base.has_object)
    tmor = rows("tensor_mor", base.has_morphism)
    for (m, n), r in tob.items():
        tmor.setdefault((base.identity(m), base.identity(n)), base.identity(r))

    partial = bool(raw.get("partial", False))
    if not partial:
        obs = base.objects()
        for m in obs:
            for n in obs:
                if (m, n) not in tob:
                    errors.append(f"tensor_ob missing ({m}, {n})")
        mors = base.morphisms()
        for u in mors:
            for v in mors:
                if (u, v) not in tmor:
                    errors.append(f"tensor_mor missing ({u}, {v})")
    if errors:
        raise SpecError(f"monoidal structure on {base.name}", errors)
    cls = PartialMonoidalCategory if partial else StrictMonoidalCategory
    return cls(base, tob, tmor, unit)


def validate_strict_monoidal(M: MonoidalCategory, objects: Optional[Iterable[Any]] = None, morphisms: Optional[Iterable[Any]] = None) -> LawReport:
    obs = list(M.objects() if objects is None else objects)
    mors = list(M.morphisms() if morphisms is None else morphisms)
    I = M.unit
    rep = LawReport(f"strict monoidal {M.name}")

    for u in mors:
        for v in mors:
            rep.check(
                "tensor typing",
                VALUES,
                lambda u=u, v=v: (
                    (M.dom(M.tensor_mor(u, v)), M.cod(M.tensor_mor(u, v))),
                    (M.tensor_ob(M.dom(u), M.dom(v)), M.tensor_ob(M.cod(u), M.cod(v))),
                ),
                pair=(u, v),
            )
    for m in obs:
        for n in obs:
            rep.check(
                "tensor identity",
                M,
                lambda m=m, n=n: (M.tensor_mor(M.identity(m), M.identity(n)), M.identity(M.tensor_ob(m, n))),
                pair=(m, n),
            )

    by_dom: Dict[Any, List[Any]] = {}
    for f in mors:
        by_dom.setdefault(M.dom(f), []).append(f)
    composable = [(g, f) for f in mors for g in by_dom.get(M.cod(f), [])]
    for g1, f1 in composable:
        for g2, f2 in composable:
            rep.check(
                "tensor composition",
                M,
                lambda g1=g1, f1=f1, g2=g2, f2=f2: (
                    M.tensor_mor(M.compose(g1, f1), M.compose(g2, f2)),
                    M.compose(M.tensor_mor(g1, g2), M.tensor_mor(f1, f2)),
                ),
                left=(g1, f1),
                right=(g2, f2),
            )

    for l in obs:
        for m in obs:
            for n in obs:
                rep.check(
                    "associativity",
                    VALUES,
                    lambda l=l, m=m, n=n: (M.tensor_ob(M.tensor_ob(l, m), n), M.tensor_ob(l, M.tensor_ob(m, n))),
                    objects=(l, m, n),
                )
    for u in mors:
        for v in mors:
            for w in mors:
                rep.check(
                    "associativity",
                    M,
                    lambda u=u, v=v, w=w: (M.tensor_mor(M.tensor_mor(u, v), w), M.tensor_mor(u, M.tensor_mor(v, w))),
                    morphisms=(u, v, w),
                )

    id_I = M.identity(I)
    for m in obs:
        rep.check("left unitality", VALUES, lambda m=m: (M.tensor_ob(I, m), m), object=m)
        rep.check("right unitality", VALUES, lambda m=m: (M.tensor_ob(m, I), m), object=m)
    for u in mors:
        rep.check("left unitality", M, lambda u=u: (M.tensor_mor(id_I, u), u), morphism=u)
        rep.check("right unitality", M, lambda u=u: (M.tensor_mor(u, id_I), u), morphism=u)
    return rep


def is_commutative(M: MonoidalCategory) -> bool:
    obs = M.objects()
    mors = M.morphisms()
    try:
        return all(M.tensor_ob(m, n) == M.tensor_ob(n, m) for m in obs for n in obs) and all(
            M.equal(M.tensor_mor(u, v), M.tensor_mor(v, u)) for u in mors for v in mors
        )
    except (OffGridError, TypingError):
        return False


# ---------- Named gradings ----------


def terminal_monoidal() -> StrictMonoidalCategory:
    base = terminal_category("1")
    return StrictMonoidalCategory(base, {("*", "*"): "*"}, {("id_*", "id_*"): "id_*"}, "*", name="1")


def z2_monoidal() -> StrictMonoidalCategory:
    base = discrete_category(["0", "1"], name="Z2")
    tob = {(m, n): str((int(m) + int(n)) % 2) for m in "01" for n in "01"}
    tmor = {(f"id_{m}", f"id_{n}"): f"id_{r}" for (m, n), r in tob.items()}
    return StrictMonoidalCategory(base, tob, tmor, "0", name="Z2")


def m2_monoidal(unit: str = "0") -> StrictMonoidalCategory:
    base = validate_category(
        {
            "name": "M2",
            "objects": ["0", "1"],
            "morphisms": [
                {"id": "id_0", "src": "0", "dst": "0"},
                {"id": "id_1", "src": "1", "dst": "1"},
                {"id": "le", "src": "0", "dst": "1"},
            ],
            "identities": {"0": "id_0", "1": "id_1"},
            "comp": [],
        }
    )
    tob = {(m, n): max(m, n) for m in "01" for n in "01"}
    tmor = {}
    for u in base.morphisms():
        for v in base.morphisms():
            s = max(base.dom(u), base.dom(v))
            t = max(base.cod(u), base.cod(v))
            tmor[(u, v)] = base.hom(s, t)[0]
    return StrictMonoidalCategory(base, tob, tmor, unit, name="M2")


GRADINGS = {
    "1": terminal_monoidal,
    "terminal": terminal_monoidal,
    "Z2": z2_monoidal,
    "M2": m2_monoidal,
}
