"""
Truncated Inj, the graded state monad T_m X = (V^m => V^m) x (V^m => X) and the
indexed state monad on the same carrier sets.

Stores V^m are tuples indexed 0..m-1; V^0 is the empty tuple. An element of
T_m X stores its state transform and its result as value tables over the
stores of V^m in lexicographic order.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from gradedkit.core.config import active_config
from gradedkit.core.errors import OffGridError, SizeBoundError, TypingError
from gradedkit.core.fincat import FiniteCategory
from gradedkit.core.finsets import FinFunction, FinSet, FinSetCategory, LazySet, probe_sets
from gradedkit.core.graded import GradedMonadData
from gradedkit.core.indexed import IndexedMonadData
from gradedkit.core.monoidal import PartialMonoidalCategory
from gradedkit.core.utils import describe

log = logging.getLogger(__name__)

Store = Tuple[Hashable, ...]


# ---------- Inj ----------


def _inj_id(m: int, m2: int, images: Sequence[int]) -> str:
    return f"{m}->{m2}:" + ",".join(str(i) for i in images)


class InjTruncation(PartialMonoidalCategory):
    """Finite cardinals 0..N and injections; + is defined when the sum stays <= N."""

    def __init__(self, bound: int):
        if bound < 0:
            raise ValueError("Inj bound must be non-negative")
        self.bound = bound
        objects = [str(k) for k in range(bound + 1)]
        mors: Dict[str, Tuple[str, str]] = {}
        self._images: Dict[str, Tuple[int, ...]] = {}
        for m in range(bound + 1):
            for m2 in range(bound + 1):
                for images in itertools.permutations(range(m2), m):
                    i = _inj_id(m, m2, images)
                    mors[i] = (str(m), str(m2))
                    self._images[i] = tuple(images)
        ids = {str(m): _inj_id(m, m, range(m)) for m in range(bound + 1)}
        comp: Dict[Tuple[str, str], str] = {}
        for f, (a, b) in mors.items():
            for g, (b2, c) in mors.items():
                if b2 == b:
                    img = tuple(self._images[g][i] for i in self._images[f])
                    comp[(g, f)] = _inj_id(int(a), int(c), img)
        base = FiniteCategory(f"Inj<={bound}", objects, mors, ids, comp)

        tob: Dict[Tuple[str, str], str] = {}
        tmor: Dict[Tuple[str, str], str] = {}
        for m in range(bound + 1):
            for n in range(bound + 1 - m):
                tob[(str(m), str(n))] = str(m + n)
        for u, (a, b) in mors.items():
            for v, (c, d) in mors.items():
                if int(b) + int(d) <= bound:
                    img = self._images[u] + tuple(int(b) + j for j in self._images[v])
                    tmor[(u, v)] = _inj_id(int(a) + int(c), int(b) + int(d), img)
        super().__init__(base, tob, tmor, "0", name=f"Inj<={bound}")
        log.info("%s: %d injections", self.name, len(mors))

    def grade(self, m: str) -> int:
        return int(m)

    def injection(self, u: str) -> Tuple[int, ...]:
        try:
            return self._images[u]
        except KeyError:
            raise TypingError(f"{u!r} is not an injection of {self.name}") from None

    def morphism(self, m: int, m2: int, images: Sequence[int]) -> str:
        i = _inj_id(m, m2, images)
        if i not in self._images:
            raise TypingError(f"no injection {i} in {self.name}")
        return i


# ---------- Elements ----------


@lru_cache(maxsize=None)
def _stores(values: Tuple[Hashable, ...], m: int) -> Tuple[Store, ...]:
    return tuple(itertools.product(values, repeat=m))


@lru_cache(maxsize=None)
def _store_positions(values: Tuple[Hashable, ...], m: int) -> Dict[Store, int]:
    return {w: i for i, w in enumerate(_stores(values, m))}


def stores(V: FinSet, m: int) -> Tuple[Store, ...]:
    return _stores(tuple(V.elements), m)


def store_position(V: FinSet, m: int, w: Store) -> int:
    try:
        return _store_positions(tuple(V.elements), m)[tuple(w)]
    except KeyError:
        raise TypingError(f"{describe(w)} is not a store in {V.name}^{m}") from None


@dataclass(frozen=True)
class StateElement:
    grade: int
    tau: Tuple[Store, ...]
    xi: Tuple[Any, ...]

    def label(self) -> str:
        t = ",".join("".join(str(v) for v in w) or "()" for w in self.tau)
        x = ",".join(describe(v) for v in self.xi)
        return f"<{self.grade}|{t}|{x}>"


def apply_state(V: FinSet, e: StateElement, store: Store) -> Tuple[Store, Any]:
    i = store_position(V, e.grade, store)
    return e.tau[i], e.xi[i]


def state_element(V: FinSet, m: int, fn) -> StateElement:
    outs = [fn(w) for w in stores(V, m)]
    return StateElement(m, tuple(tuple(s) for s, _ in outs), tuple(x for _, x in outs))


def _count_T(V: FinSet, m: int, X: FinSet) -> int:
    k = len(V) ** m
    return (k * len(X)) ** k


def graded_state_T(V: FinSet, m: int, X: FinSet, max_elements: Optional[int] = None) -> LazySet:
    bound = max_elements if max_elements is not None else active_config().max_elements

    def enumerate_all():
        count = _count_T(V, m, X)
        if count > bound:
            raise SizeBoundError(f"T_{m}({X.name}) over |V|={len(V)} has {count} elements, bound is {bound}")
        ws = stores(V, m)
        for tau in itertools.product(ws, repeat=len(ws)):
            for xi in itertools.product(X.elements, repeat=len(ws)):
                yield StateElement(m, tau, xi)

    def contains(e):
        if not isinstance(e, StateElement) or e.grade != m:
            return False
        ws = _store_positions(tuple(V.elements), m)
        n = len(ws)
        return len(e.tau) == n and len(e.xi) == n and all(w in ws for w in e.tau) and all(X.contains(x) for x in e.xi)

    return LazySet(f"T{m}({X.name})", ("T", V.key, m, X.key), enumerate_all, contains)


def restrict(images: Sequence[int], w: Store) -> Store:
    return tuple(w[j] for j in images)


def _check_injective(images: Sequence[int], m2: int) -> None:
    if len(set(images)) != len(images) or any(not 0 <= j < m2 for j in images):
        raise TypingError(f"{tuple(images)} is not an injection into {m2}")


def transport_state(V: FinSet, images: Sequence[int], m2: int, e: StateElement) -> StateElement:
    """T_u(tau, xi) = (u . tau, xi . V^u); u . tau rewrites the image of u and leaves the rest of the store."""
    _check_injective(images, m2)
    if len(images) != e.grade:
        raise TypingError(f"injection of length {len(images)} applied to an element of grade {e.grade}")

    def run(w):
        v = restrict(images, w)
        t, x = apply_state(V, e, v)
        out = list(w)
        for i, j in enumerate(images):
            out[j] = t[i]
        return tuple(out), x

    return state_element(V, m2, run)


def graded_mu_element(V: FinSet, m: int, n: int, e: StateElement) -> StateElement:
    def run(w):
        v, rest = w[:m], w[m:]
        t, inner = apply_state(V, e, v)
        t2, x = apply_state(V, inner, rest)
        return tuple(t) + tuple(t2), x

    return state_element(V, m + n, run)


def indexed_mu_element(V: FinSet, m: int, e: StateElement) -> StateElement:
    """(tau, sigma) in T_m T_m X: run tau, then the element sigma(v) on the new store."""

    def run(v):
        t, inner = apply_state(V, e, v)
        return apply_state(V, inner, t)

    return state_element(V, m, run)


def eta_element(V: FinSet, m: int, x: Any) -> StateElement:
    return state_element(V, m, lambda w: (w, x))


def map_element(e: StateElement, f) -> StateElement:
    return StateElement(e.grade, e.tau, tuple(f(x) for x in e.xi))


# ---------- Functions between carrier sets ----------


def graded_state_Tmor(V: FinSet, m: int, f: FinFunction) -> FinFunction:
    return FinFunction(graded_state_T(V, m, f.dom), graded_state_T(V, m, f.cod), rule=lambda e: map_element(e, f), trusted=True)


def graded_state_Tu(V: FinSet, images: Sequence[int], m2: int, X: FinSet) -> FinFunction:
    _check_injective(images, m2)
    m = len(images)
    return FinFunction(graded_state_T(V, m, X), graded_state_T(V, m2, X), rule=lambda e: transport_state(V, images, m2, e), trusted=True)


def graded_state_eta(V: FinSet, X: FinSet) -> FinFunction:
    return FinFunction(X, graded_state_T(V, 0, X), rule=lambda x: eta_element(V, 0, x), trusted=True)


def graded_state_mu(V: FinSet, m: int, n: int, X: FinSet) -> FinFunction:
    inner = graded_state_T(V, n, X)
    return FinFunction(
        graded_state_T(V, m, inner), graded_state_T(V, m + n, X), rule=lambda e: graded_mu_element(V, m, n, e), trusted=True
    )


def indexed_state_eta(V: FinSet, m: int, X: FinSet) -> FinFunction:
    return FinFunction(X, graded_state_T(V, m, X), rule=lambda x: eta_element(V, m, x), trusted=True)


def indexed_state_mu(V: FinSet, m: int, X: FinSet) -> FinFunction:
    inner = graded_state_T(V, m, X)
    return FinFunction(graded_state_T(V, m, inner), inner, rule=lambda e: indexed_mu_element(V, m, e), trusted=True)


# ---------- Packaging ----------


@dataclass
class StateMonads:
    values: FinSet
    grading: InjTruncation
    graded: GradedMonadData
    indexed: IndexedMonadData
    category: FinSetCategory


def value_set(size: int) -> FinSet:
    return FinSet("V", range(size))


def build_state_monads(v_size: Optional[int] = None, bound: Optional[int] = None, probe_max_size: Optional[int] = None) -> StateMonads:
    cfg = active_config()
    V = value_set(cfg.state_values if v_size is None else v_size)
    M = InjTruncation(cfg.inj_bound if bound is None else bound)
    C = FinSetCategory(probe_sets(probe_max_size))

    def T_ob(m, X):
        return graded_state_T(V, M.grade(m), X)

    def T_mor(m, f):
        return graded_state_Tmor(V, M.grade(m), f)

    def T_u(u, X):
        return graded_state_Tu(V, M.injection(u), M.grade(M.cod(u)), X)

    def eta(X):
        return graded_state_eta(V, X)

    def mu(m, n, X):
        M.tensor_ob(m, n)
        return graded_state_mu(V, M.grade(m), M.grade(n), X)

    graded = GradedMonadData(M, C, T_ob, T_mor, T_u, eta, mu, name=f"State[V={len(V)}]")
    indexed = IndexedMonadData(
        M.base,
        C,
        T_ob,
        T_mor,
        T_u,
        lambda b, X: indexed_state_eta(V, M.grade(b), X),
        lambda b, X: indexed_state_mu(V, M.grade(b), X),
        name=f"IState[V={len(V)}]",
    )
    log.info("state monads: |V|=%d, %s, %d probe sets", len(V), M.name, len(C.objects()))
    return StateMonads(V, M, graded, indexed, C)


def cardinality(V: FinSet, m: int, X: FinSet) -> int:
    return _count_T(V, m, X)


def off_grid(M: InjTruncation, m: str, n: str) -> bool:
    try:
        M.tensor_ob(m, n)
        return False
    except OffGridError:
        return True


def grid(M: InjTruncation) -> List[Tuple[str, str]]:
    return [(m, n) for m in M.objects() for n in M.objects() if not off_grid(M, m, n)]
