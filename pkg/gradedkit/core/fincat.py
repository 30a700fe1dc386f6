from __future__ import annotations

import itertools
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import CompositionError, SizeBoundError, SpecError
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)

CATEGORY_KEYS = {"name", "objects", "morphisms", "identities", "comp", "monoidal", "provenance"}


class Category(ABC):
    name: str = "C"
    enumerable: bool = True

    @abstractmethod
    def objects(self) -> List[Any]: ...

    @abstractmethod
    def hom(self, a: Any, b: Any) -> List[Any]: ...

    @abstractmethod
    def dom(self, f: Any) -> Any: ...

    @abstractmethod
    def cod(self, f: Any) -> Any: ...

    @abstractmethod
    def identity(self, a: Any) -> Any: ...

    @abstractmethod
    def compose(self, g: Any, f: Any) -> Any: ...

    def compose_all(self, *fs: Any) -> Any:
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def morphisms(self) -> List[Any]:
        obs = self.objects()
        return [f for a in obs for b in obs for f in self.hom(a, b)]

    def sample_objects(self) -> List[Any]:
        return self.objects()

    def sample_morphisms(self) -> List[Any]:
        return self.morphisms()

    def equal(self, f: Any, g: Any) -> bool:
        return f == g

    def witness(self, f: Any, g: Any) -> Optional[str]:
        return None

    def sort_key(self, f: Any) -> Any:
        return describe(f)

    def label_object(self, x: Any) -> str:
        return describe(x)

    def label_morphism(self, f: Any) -> str:
        return describe(f)

    def is_identity(self, f: Any) -> bool:
        return self.equal(f, self.identity(self.dom(f)))

    def composable(self, g: Any, f: Any) -> bool:
        return self.cod(f) == self.dom(g)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class FiniteCategory(Category):
    def __init__(
        self,
        name: str,
        objects: List[str],
        morphisms: Dict[str, Tuple[str, str]],
        identities: Dict[str, str],
        comp: Dict[Tuple[str, str], str],
        origin: Optional[Dict[str, Any]] = None,
    ):
        self.name = name
        self._objects = list(objects)
        self._mor = dict(morphisms)
        self._ids = dict(identities)
        self._comp = dict(comp)
        self._pos = {m: i for i, m in enumerate(self._mor)}
        self._ob_pos = {o: i for i, o in enumerate(self._objects)}
        self._hom: Dict[Tuple[str, str], List[str]] = {}
        for m, (s, t) in self._mor.items():
            self._hom.setdefault((s, t), []).append(m)
        # tabulations of computed categories remember what each id stands for
        self.origin: Dict[str, Any] = dict(origin or {})

    def objects(self) -> List[str]:
        return list(self._objects)

    def morphisms(self) -> List[str]:
        return list(self._mor)

    def hom(self, a: str, b: str) -> List[str]:
        return list(self._hom.get((a, b), []))

    def dom(self, f: str) -> str:
        try:
            return self._mor[f][0]
        except KeyError:
            raise CompositionError(f"unknown morphism {f!r} in {self.name}") from None

    def cod(self, f: str) -> str:
        try:
            return self._mor[f][1]
        except KeyError:
            raise CompositionError(f"unknown morphism {f!r} in {self.name}") from None

    def identity(self, a: str) -> str:
        try:
            return self._ids[a]
        except KeyError:
            raise CompositionError(f"unknown object {a!r} in {self.name}") from None

    def compose(self, g: str, f: str) -> str:
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise CompositionError(
                f"{self.name}: cannot compose {g!r} after {f!r} "
                f"({self.cod(f)} vs {self.dom(g)})"
            ) from None

    def sort_key(self, f: str) -> Any:
        return self._pos.get(f, len(self._pos))

    def has_object(self, a: Any) -> bool:
        return a in self._ob_pos

    def has_morphism(self, f: Any) -> bool:
        return f in self._mor

    def tables(self) -> Dict[str, Any]:
        return {
            "objects": list(self._objects),
            "morphisms": [(m, s, t) for m, (s, t) in self._mor.items()],
            "identities": dict(self._ids),
            "comp": sorted(self._comp.items()),
        }

    def same_tables(self, other: "FiniteCategory") -> bool:
        return self.tables() == other.tables()

    def to_spec(self) -> Dict[str, Any]:
        comp = sorted(self._comp.items(), key=lambda kv: (self._pos[kv[0][0]], self._pos[kv[0][1]]))
        return {
            "name": self.name,
            "objects": list(self._objects),
            "morphisms": [{"id": m, "src": s, "dst": t} for m, (s, t) in self._mor.items()],
            "identities": dict(self._ids),
            "comp": [{"g": g, "f": f, "result": r} for (g, f), r in comp],
        }


# ---------- Validation ----------


def validate_category(raw: Dict[str, Any], name: str = "", max_morphisms: Optional[int] = None) -> FiniteCategory:
    """
    Build a FiniteCategory from its spec-file form, verifying every law by enumeration.
    Composites with an identity factor may be omitted from `comp`; everything else must be listed.
    """
    if not isinstance(raw, dict):
        raise SpecError("category spec must be a JSON object")
    errors: List[str] = []
    unknown = sorted(set(raw) - CATEGORY_KEYS)
    if unknown:
        errors.append(f"unknown keys {unknown}")

    name = name or str(raw.get("name", "C"))
    objects = raw.get("objects")
    if not isinstance(objects, list) or not all(isinstance(o, str) for o in objects):
        raise SpecError(f"category {name}", errors + ["objects must be a list of strings"])
    if len(set(objects)) != len(objects):
        errors.append("duplicate object identifiers")
    obset = set(objects)

    bound = max_morphisms if max_morphisms is not None else active_config().max_morphisms
    raw_mors = raw.get("morphisms", [])
    if not isinstance(raw_mors, list):
        raise SpecError(f"category {name}", errors + ["morphisms must be a list"])
    if len(raw_mors) > bound:
        raise SizeBoundError(f"category {name} has {len(raw_mors)} morphisms, bound is {bound}")

    mors: Dict[str, Tuple[str, str]] = {}
    for entry in raw_mors:
        if not isinstance(entry, dict) or set(entry) - {"id", "src", "dst"}:
            errors.append(f"bad morphism entry {entry!r}")
            continue
        m, s, t = entry.get("id"), entry.get("src"), entry.get("dst")
        if not isinstance(m, str):
            errors.append(f"morphism without string id: {entry!r}")
            continue
        if m in mors:
            errors.append(f"duplicate morphism {m}")
        if not isinstance(s, str) or not isinstance(t, str):
            errors.append(f"morphism {m} endpoints must be object ids, got ({s!r} -> {t!r})")
            continue
        if s not in obset or t not in obset:
            errors.append(f"morphism {m} has unknown endpoint ({s} -> {t})")
        mors[m] = (s, t)

    ids = raw.get("identities", {})
    if not isinstance(ids, dict):
        errors.append("identities must be an object")
        ids = {}
    for o in objects:
        i = ids.get(o)
        if i is None:
            errors.append(f"missing identity for object {o}")
        elif not isinstance(i, str):
            errors.append(f"identity of {o} must be a morphism id, got {i!r}")
        elif i not in mors:
            errors.append(f"identity of {o} is unknown morphism {i}")
        elif mors[i] != (o, o):
            errors.append(f"identity of {o} has type {mors[i][0]} -> {mors[i][1]}")
    for o in ids:
        if o not in obset:
            errors.append(f"identity given for unknown object {o}")

    if errors:
        raise SpecError(f"category {name}", errors)

    comp: Dict[Tuple[str, str], str] = {}
    raw_comp = raw.get("comp", [])
    if not isinstance(raw_comp, list):
        raise SpecError(f"category {name}", ["comp must be a list"])
    for entry in raw_comp:
        if not isinstance(entry, dict) or set(entry) - {"g", "f", "result"}:
            errors.append(f"bad comp entry {entry!r}")
            continue
        g, f, r = entry.get("g"), entry.get("f"), entry.get("result")
        if not all(isinstance(x, str) for x in (g, f, r)):
            errors.append(f"comp entry ids must be strings: {entry!r}")
            continue
        if g not in mors or f not in mors or r not in mors:
            errors.append(f"comp entry mentions unknown morphism ({g}, {f}) -> {r}")
            continue
        if mors[f][1] != mors[g][0]:
            errors.append(f"comp defined on non-composable pair ({g}, {f})")
            continue
        if mors[r] != (mors[f][0], mors[g][1]):
            errors.append(f"comp ({g}, {f}) -> {r} is ill-typed")
            continue
        if (g, f) in comp and comp[(g, f)] != r:
            errors.append(f"comp ({g}, {f}) listed twice with different results")
        comp[(g, f)] = r

    for f, (s, t) in mors.items():
        comp.setdefault((ids[t], f), f)
        comp.setdefault((f, ids[s]), f)

    for g, (gs, _) in mors.items():
        for f, (_, ft) in mors.items():
            if ft == gs and (g, f) not in comp:
                errors.append(f"partial comp: missing ({g}, {f})")
    if errors:
        raise SpecError(f"category {name}", errors)

    cat = FiniteCategory(name, objects, mors, ids, comp)
    errors.extend(category_law_errors(cat))
    if errors:
        raise SpecError(f"category {name}", errors)
    log.info("validated category %s: %d objects, %d morphisms", name, len(objects), len(mors))
    return cat


def category_law_errors(cat: FiniteCategory) -> List[str]:
    errors: List[str] = []
    for f in cat.morphisms():
        s, t = cat.dom(f), cat.cod(f)
        if cat.compose(cat.identity(t), f) != f or cat.compose(f, cat.identity(s)) != f:
            errors.append(f"identity law fails at {f}")
    mors = cat.morphisms()
    by_dom: Dict[str, List[str]] = {}
    for m in mors:
        by_dom.setdefault(cat.dom(m), []).append(m)
    for f in mors:
        for g in by_dom.get(cat.cod(f), []):
            gf = cat.compose(g, f)
            for h in by_dom.get(cat.cod(g), []):
                if cat.compose(h, gf) != cat.compose(cat.compose(h, g), f):
                    errors.append(f"associativity counterexample ({h}, {g}, {f})")
                    if len(errors) > 20:
                        return errors
    return errors


def compose(cat: Category, g: Any, f: Any) -> Any:
    if not cat.composable(g, f):
        raise CompositionError(f"{cat.name}: {describe(g)} and {describe(f)} are not composable")
    return cat.compose(g, f)


# ---------- Combinators ----------


class ProductCategory(Category):
    def __init__(self, a: Category, b: Category):
        self.a, self.b = a, b
        self.name = f"{a.name}x{b.name}"
        self.enumerable = a.enumerable and b.enumerable

    def objects(self):
        return [(x, y) for x in self.a.objects() for y in self.b.objects()]

    def sample_objects(self):
        return [(x, y) for x in self.a.sample_objects() for y in self.b.sample_objects()]

    def sample_morphisms(self):
        return [(f, g) for f in self.a.sample_morphisms() for g in self.b.sample_morphisms()]

    def hom(self, x, y):
        return [(f, g) for f in self.a.hom(x[0], y[0]) for g in self.b.hom(x[1], y[1])]

    def dom(self, f):
        return (self.a.dom(f[0]), self.b.dom(f[1]))

    def cod(self, f):
        return (self.a.cod(f[0]), self.b.cod(f[1]))

    def identity(self, x):
        return (self.a.identity(x[0]), self.b.identity(x[1]))

    def compose(self, g, f):
        return (self.a.compose(g[0], f[0]), self.b.compose(g[1], f[1]))

    def equal(self, f, g):
        return self.a.equal(f[0], g[0]) and self.b.equal(f[1], g[1])

    def witness(self, f, g):
        if not self.a.equal(f[0], g[0]):
            return self.a.witness(f[0], g[0])
        return self.b.witness(f[1], g[1])

    def sort_key(self, f):
        return (self.a.sort_key(f[0]), self.b.sort_key(f[1]))

    def label_object(self, x):
        return f"({self.a.label_object(x[0])},{self.b.label_object(x[1])})"

    def label_morphism(self, f):
        return f"({self.a.label_morphism(f[0])},{self.b.label_morphism(f[1])})"


class OppositeCategory(Category):
    def __init__(self, base: Category):
        self.base = base
        self.name = f"op({base.name})"
        self.enumerable = base.enumerable

    def objects(self):
        return self.base.objects()

    def sample_objects(self):
        return self.base.sample_objects()

    def sample_morphisms(self):
        return self.base.sample_morphisms()

    def hom(self, a, b):
        return self.base.hom(b, a)

    def dom(self, f):
        return self.base.cod(f)

    def cod(self, f):
        return self.base.dom(f)

    def identity(self, a):
        return self.base.identity(a)

    def compose(self, g, f):
        return self.base.compose(f, g)

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


def _op_name(name: str) -> str:
    if name.startswith("op(") and name.endswith(")"):
        return name[3:-1]
    return f"op({name})"


def opposite(cat: Category) -> Category:
    if isinstance(cat, FiniteCategory):
        mors = {m: (t, s) for m, (s, t) in cat._mor.items()}
        comp = {(f, g): r for (g, f), r in cat._comp.items()}
        return FiniteCategory(_op_name(cat.name), cat.objects(), mors, cat._ids, comp, cat.origin)
    if isinstance(cat, OppositeCategory):
        return cat.base
    return OppositeCategory(cat)


def tabulate(cat: Category, name: Optional[str] = None, max_morphisms: Optional[int] = None):
    """
    Materialise an enumerable category. Returns (FiniteCategory, object ids, morphism ids);
    the id maps are keyed by the original values.
    """
    bound = max_morphisms if max_morphisms is not None else active_config().max_morphisms
    obs = cat.objects()
    used: Dict[str, int] = {}

    def fresh(label: str) -> str:
        n = used.get(label, 0)
        used[label] = n + 1
        return label if n == 0 else f"{label}#{n}"

    ob_ids: Dict[Hashable, str] = {}
    for x in obs:
        ob_ids[x] = fresh(cat.label_object(x))

    mor_ids: Dict[Hashable, str] = {}
    mors: Dict[str, Tuple[str, str]] = {}
    origin: Dict[str, Any] = {i: x for x, i in ob_ids.items()}
    for a in obs:
        for b in obs:
            for f in sorted(cat.hom(a, b), key=cat.sort_key):
                if len(mors) >= bound:
                    raise SizeBoundError(f"tabulating {cat.name} exceeds {bound} morphisms")
                i = fresh(cat.label_morphism(f))
                mor_ids[f] = i
                mors[i] = (ob_ids[a], ob_ids[b])
                origin[i] = f
    ids = {ob_ids[x]: mor_ids[cat.identity(x)] for x in obs}
    comp: Dict[Tuple[str, str], str] = {}
    by_dom: Dict[Any, List[Any]] = {}
    for f in mor_ids:
        by_dom.setdefault(cat.dom(f), []).append(f)
    for f in mor_ids:
        for g in by_dom.get(cat.cod(f), []):
            comp[(mor_ids[g], mor_ids[f])] = mor_ids[cat.compose(g, f)]
    log.info("tabulated %s: %d objects, %d morphisms", cat.name, len(obs), len(mors))
    return FiniteCategory(name or cat.name, [ob_ids[x] for x in obs], mors, ids, comp, origin), ob_ids, mor_ids


def product_category(a: Category, b: Category) -> FiniteCategory:
    return tabulate(ProductCategory(a, b))[0]


# ---------- Small named categories ----------


def terminal_category(name: str = "1") -> FiniteCategory:
    return FiniteCategory(name, ["*"], {"id_*": ("*", "*")}, {"*": "id_*"}, {("id_*", "id_*"): "id_*"})


def walking_arrow(name: str = "2") -> FiniteCategory:
    return validate_category(
        {
            "name": name,
            "objects": ["a", "b"],
            "morphisms": [
                {"id": "id_a", "src": "a", "dst": "a"},
                {"id": "id_b", "src": "b", "dst": "b"},
                {"id": "u", "src": "a", "dst": "b"},
            ],
            "identities": {"a": "id_a", "b": "id_b"},
            "comp": [],
        }
    )


def discrete_category(objects: Iterable[str], name: str = "D") -> FiniteCategory:
    obs = list(objects)
    mors = {f"id_{o}": (o, o) for o in obs}
    return FiniteCategory(name, obs, mors, {o: f"id_{o}" for o in obs}, {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in obs})


def hom_count_table(cat: Category) -> Dict[Tuple[str, str], int]:
    obs = cat.objects()
    return {(cat.label_object(a), cat.label_object(b)): len(cat.hom(a, b)) for a, b in itertools.product(obs, obs)}
