from __future__ import annotations

import hashlib
import itertools
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import CompositionError, SizeBoundError, TypingError
from gradedkit.core.fincat import Category
from gradedkit.core.utils import describe


class FinSet:
    def __init__(self, name: str, elements: Iterable[Hashable], key: Optional[Hashable] = None):
        elems = tuple(elements)
        if len(set(elems)) != len(elems):
            raise ValueError(f"finite set {name} has repeated elements")
        self.name = name
        self.key = key if key is not None else ("set", name, elems)
        self._elements: Optional[Tuple[Hashable, ...]] = elems
        self._index: Optional[Dict[Hashable, int]] = None
        self._hash: Optional[int] = None

    @property
    def elements(self) -> Tuple[Hashable, ...]:
        return self._elements  # type: ignore[return-value]

    def contains(self, x: Hashable) -> bool:
        return x in self._position_map()

    def _position_map(self) -> Dict[Hashable, int]:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.elements)}
        return self._index

    def position(self, x: Hashable) -> int:
        try:
            return self._position_map()[x]
        except KeyError:
            raise TypingError(f"{describe(x)} is not an element of {self.name}") from None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, FinSet) and hash(self) == hash(other) and self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def label(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"FinSet({self.name})"


class LazySet(FinSet):
    def __init__(
        self,
        name: str,
        key: Hashable,
        enumerate_fn: Callable[[], Iterable[Hashable]],
        contains_fn: Callable[[Hashable], bool],
    ):
        self.name = name
        self.key = key
        self._enumerate = enumerate_fn
        self._contains = contains_fn
        self._elements = None
        self._index = None
        self._hash = None

    @property
    def elements(self) -> Tuple[Hashable, ...]:
        if self._elements is None:
            self._elements = tuple(self._enumerate())
        return self._elements

    def contains(self, x: Hashable) -> bool:
        if self._index is not None:
            return x in self._index
        return self._contains(x)


class FinFunction:
    __slots__ = ("dom", "cod", "_rule", "_values", "_hash", "_trusted")

    def __init__(
        self,
        dom: FinSet,
        cod: FinSet,
        rule: Optional[Callable[[Hashable], Hashable]] = None,
        values: Optional[Sequence[Hashable]] = None,
        trusted: bool = False,
    ):
        self.dom = dom
        self.cod = cod
        self._rule = rule
        self._values = tuple(values) if values is not None else None
        self._hash: Optional[int] = None
        self._trusted = trusted
        if rule is None and values is None:
            raise ValueError("FinFunction needs a rule or a value table")

    @property
    def values(self) -> Tuple[Hashable, ...]:
        if self._values is None:
            vals = tuple(self._rule(x) for x in self.dom.elements)  # type: ignore[misc]
            if not self._trusted:
                for x, y in zip(self.dom.elements, vals):
                    if not self.cod.contains(y):
                        raise TypingError(
                            f"{describe(x)} is sent to {describe(y)}, outside {self.cod.name}"
                        )
            self._values = vals
        return self._values

    def __call__(self, x: Hashable) -> Hashable:
        if self._values is not None:
            return self._values[self.dom.position(x)]
        y = self._rule(x)  # type: ignore[misc]
        if not self._trusted and not self.cod.contains(y):
            raise TypingError(f"{describe(x)} is sent to {describe(y)}, outside {self.cod.name}")
        return y

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinFunction):
            return False
        return self.dom == other.dom and self.cod == other.cod and self.values == other.values

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self.values))
        return self._hash

    def label(self) -> str:
        vals = self.values
        if len(vals) <= 8:
            body = ",".join(describe(v) for v in vals)
        else:
            body = hashlib.sha1(repr([describe(v) for v in vals]).encode("utf-8")).hexdigest()[:10]
        return f"{self.dom.name}->{self.cod.name}[{body}]"

    def __repr__(self) -> str:
        return f"FinFunction({self.label()})"

    @classmethod
    def identity(cls, x: FinSet) -> "FinFunction":
        return cls(x, x, values=x.elements, trusted=True)


def finset(name: str, size: int) -> FinSet:
    return FinSet(name, range(size))


def probe_sets(max_size: Optional[int] = None) -> List[FinSet]:
    n = active_config().probe_max_size if max_size is None else max_size
    return [finset(f"X{k}", k) for k in range(n + 1)]


class FinSetCategory(Category):
    def __init__(self, probes: Optional[Sequence[FinSet]] = None, name: str = "FinSet", max_morphisms: Optional[int] = None):
        self.probes = list(probes) if probes is not None else probe_sets()
        self.name = name
        self.max_morphisms = max_morphisms

    def objects(self) -> List[FinSet]:
        return list(self.probes)

    def hom(self, a: FinSet, b: FinSet) -> List[FinFunction]:
        bound = self.max_morphisms if self.max_morphisms is not None else active_config().max_morphisms
        count = len(b) ** len(a)
        if count > bound:
            raise SizeBoundError(f"hom({a.name}, {b.name}) has {count} functions, bound is {bound}")
        return [FinFunction(a, b, values=vals, trusted=True) for vals in itertools.product(b.elements, repeat=len(a))]

    def dom(self, f: FinFunction) -> FinSet:
        return f.dom

    def cod(self, f: FinFunction) -> FinSet:
        return f.cod

    def identity(self, a: FinSet) -> FinFunction:
        return FinFunction.identity(a)

    def compose(self, g: FinFunction, f: FinFunction) -> FinFunction:
        if f.cod != g.dom:
            raise CompositionError(f"cannot compose {g.label()} after {f.label()}")
        return FinFunction(f.dom, g.cod, rule=lambda x: g(f(x)), trusted=True)

    def witness(self, f: FinFunction, g: FinFunction) -> Optional[str]:
        if f.dom != g.dom or f.cod != g.cod:
            return f"type mismatch: {f.dom.name}->{f.cod.name} vs {g.dom.name}->{g.cod.name}"
        for x, y, z in zip(f.dom.elements, f.values, g.values):
            if y != z:
                return f"{describe(x)}: {describe(y)} vs {describe(z)}"
        return None

    def sort_key(self, f: FinFunction) -> Any:
        return (f.dom.name, f.cod.name, tuple(describe(v) for v in f.values))

    def label_object(self, x: FinSet) -> str:
        return x.name

    def label_morphism(self, f: FinFunction) -> str:
        return f.label()


def function(dom: FinSet, cod: FinSet, rule: Callable[[Hashable], Hashable]) -> FinFunction:
    return FinFunction(dom, cod, rule=rule)
