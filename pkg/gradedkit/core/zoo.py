from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Optional, Sequence

from gradedkit.core.errors import SpecError
from gradedkit.core.fincat import Category, FiniteCategory, validate_category, walking_arrow
from gradedkit.core.finsets import FinFunction, FinSet, FinSetCategory, probe_sets
from gradedkit.core.graded import GradedMonadData
from gradedkit.core.indexed import IndexedMonadData, MonadData
from gradedkit.core.monoidal import MonoidalCategory, m2_monoidal, terminal_monoidal, z2_monoidal
from gradedkit.core.statemonads import build_state_monads

log = logging.getLogger(__name__)


def sum_set(X: FinSet, E: FinSet) -> FinSet:
    elems = [("inl", x) for x in X] + [("inr", e) for e in E]
    return FinSet(f"({X.name}+{E.name})", elems, key=("sum", X.key, E.key))


def product_set(W: FinSet, X: FinSet) -> FinSet:
    return FinSet(f"({W.name}x{X.name})", [(a, x) for a in W for x in X], key=("prod", W.key, X.key))


def error_set(size: int) -> FinSet:
    return FinSet("E", [f"e{i}" for i in range(size)])


def _finsets(probe_max_size: Optional[int]) -> FinSetCategory:
    return FinSetCategory(probe_sets(probe_max_size))


# ---------- Identity ----------


def identity_graded(M: Optional[MonoidalCategory] = None, C: Optional[Category] = None) -> GradedMonadData:
    M = M or terminal_monoidal()
    C = C or _finsets(None)

    def mu(m, n, c):
        M.tensor_ob(m, n)
        return C.identity(c)

    return GradedMonadData(M, C, lambda m, c: c, lambda m, f: f, lambda u, c: C.identity(c), C.identity, mu, name="Id")


def identity_monad(C: Optional[Category] = None) -> MonadData:
    C = C or _finsets(None)
    return MonadData(C, lambda c: c, lambda f: f, C.identity, C.identity, name="Id")


# ---------- Exception ----------


def exception_monad(error_size: int = 1, probe_max_size: Optional[int] = None) -> MonadData:
    C = _finsets(probe_max_size)
    E = error_set(error_size)

    def T_ob(X):
        return sum_set(X, E)

    def T_mor(f):
        return FinFunction(T_ob(f.dom), T_ob(f.cod), rule=lambda z: ("inl", f(z[1])) if z[0] == "inl" else z, trusted=True)

    def eta(X):
        return FinFunction(X, T_ob(X), rule=lambda x: ("inl", x), trusted=True)

    def mu(X):
        return FinFunction(T_ob(T_ob(X)), T_ob(X), rule=lambda z: z[1] if z[0] == "inl" else z, trusted=True)

    return MonadData(C, T_ob, T_mor, eta, mu, name=f"Exc[E={error_size}]")


def exception_m2(error_size: int = 1, probe_max_size: Optional[int] = None, mutate_mu: bool = False) -> GradedMonadData:
    """
    Graded by the poset 0 <= 1 under max: T_0 = Id, T_1 = (-) + E, T_le = inl and
    mu_{1,1} the codiagonal on E. `mutate_mu` relabels the outer error in mu_{1,1}.
    """
    M = m2_monoidal()
    C = _finsets(probe_max_size)
    E = error_set(error_size)
    swap = {e: E.elements[(i + 1) % len(E)] for i, e in enumerate(E.elements)}

    def T_ob(m, X):
        return X if m == "0" else sum_set(X, E)

    def T_mor(m, f):
        if m == "0":
            return f
        return FinFunction(T_ob(m, f.dom), T_ob(m, f.cod), rule=lambda z: ("inl", f(z[1])) if z[0] == "inl" else z, trusted=True)

    def T_u(u, X):
        if u == "le":
            return FinFunction(X, sum_set(X, E), rule=lambda x: ("inl", x), trusted=True)
        return C.identity(T_ob(M.dom(u), X))

    def mu(m, n, X):
        if (m, n) != ("1", "1"):
            return C.identity(T_ob(M.tensor_ob(m, n), X))
        TX = sum_set(X, E)

        def codiagonal(z):
            if z[0] == "inl":
                return z[1]
            return ("inr", swap[z[1]]) if mutate_mu else z

        return FinFunction(sum_set(TX, E), TX, rule=codiagonal, trusted=True)

    name = f"Exc_M2[E={error_size}]" + ("~mu" if mutate_mu else "")
    return GradedMonadData(M, C, T_ob, T_mor, T_u, C.identity, mu, name=name)


def graded_over_terminal(t: MonadData) -> GradedMonadData:
    M = terminal_monoidal()
    C = t.base
    return GradedMonadData(
        M, C,
        lambda m, c: t.T_ob(c),
        lambda m, f: t.T_mor(f),
        lambda u, c: C.identity(t.T_ob(c)),
        t.eta,
        lambda m, n, c: t.mu(c),
        name=f"{t.name}/1",
        objects=t.objects,
        morphisms=t.morphisms,
    )


# ---------- Writer ----------


def writer_monad(
    elements: Sequence[Any] = (0, 1),
    op: Optional[Callable[[Any, Any], Any]] = None,
    unit: Any = 0,
    mu_rule: Optional[Callable[[Any, Any], Any]] = None,
    probe_max_size: Optional[int] = None,
    name: str = "Writer",
) -> MonadData:
    C = _finsets(probe_max_size)
    W = FinSet("W", elements)
    op = op or (lambda a, b: a ^ b)
    combine = mu_rule or op

    def T_ob(X):
        return product_set(W, X)

    def T_mor(f):
        return FinFunction(T_ob(f.dom), T_ob(f.cod), rule=lambda p: (p[0], f(p[1])), trusted=True)

    def eta(X):
        return FinFunction(X, T_ob(X), rule=lambda x: (unit, x), trusted=True)

    def mu(X):
        return FinFunction(T_ob(T_ob(X)), T_ob(X), rule=lambda p: (combine(p[0], p[1][0]), p[1][1]), trusted=True)

    return MonadData(C, T_ob, T_mor, eta, mu, name=name)


def magma_writer(probe_max_size: Optional[int] = None) -> MonadData:
    table = {(1, 1): 2, (1, 2): 2, (2, 1): 1, (2, 2): 1}

    def op(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return table[(a, b)]

    return writer_monad((0, 1, 2), op, 0, probe_max_size=probe_max_size, name="MagmaWriter")


def writer_graded(
    M: Optional[MonoidalCategory] = None,
    cocycle: Optional[Callable[[Any, Any], int]] = None,
    mu_override: Optional[Dict[Any, Callable[[int, int], int]]] = None,
    probe_max_size: Optional[int] = None,
    name: str = "Writer",
) -> GradedMonadData:
    """
    T_m X = Z/2 x X for every grade, mu_{m,n}(a, (b, x)) = (a + b + cocycle(m, n), x).
    `mu_override` maps a grade pair to a replacement for the tag arithmetic.
    """
    M = M or terminal_monoidal()
    C = _finsets(probe_max_size)
    W = FinSet("Z2", (0, 1))
    cocycle = cocycle or (lambda m, n: 0)
    overrides = mu_override or {}

    def T_ob(m, X):
        return product_set(W, X)

    def T_mor(m, f):
        return FinFunction(T_ob(m, f.dom), T_ob(m, f.cod), rule=lambda p: (p[0], f(p[1])), trusted=True)

    def T_u(u, X):
        return C.identity(T_ob(M.dom(u), X))

    def eta(X):
        return FinFunction(X, T_ob(M.unit, X), rule=lambda x: (0, x), trusted=True)

    def mu(m, n, X):
        M.tensor_ob(m, n)
        tag = overrides.get((m, n)) or (lambda a, b: a ^ b ^ cocycle(m, n))
        return FinFunction(T_ob(m, T_ob(n, X)), T_ob(M.tensor_ob(m, n), X), rule=lambda p: (tag(p[0], p[1][0]), p[1][1]), trusted=True)

    return GradedMonadData(M, C, T_ob, T_mor, T_u, eta, mu, name=name)


def writer_z2(mutate_mu: bool = False, probe_max_size: Optional[int] = None) -> GradedMonadData:
    overrides = {("1", "1"): (lambda a, b: a)} if mutate_mu else None
    return writer_graded(
        z2_monoidal(),
        cocycle=lambda m, n: int(m == "1" and n == "1"),
        mu_override=overrides,
        probe_max_size=probe_max_size,
        name="Writer_Z2" + ("~mu11" if mutate_mu else ""),
    )


# ---------- Tabulated closure monad on a chain ----------


def chain_category(size: int = 3) -> FiniteCategory:
    obs = [str(i) for i in range(size)]
    mors = [{"id": f"id_{a}", "src": a, "dst": a} for a in obs]
    mors += [{"id": f"{a}<{b}", "src": a, "dst": b} for a in obs for b in obs if int(a) < int(b)]
    comp = [
        {"g": f"{b}<{c}", "f": f"{a}<{b}", "result": f"{a}<{c}"}
        for a in obs for b in obs for c in obs if int(a) < int(b) < int(c)
    ]
    return validate_category(
        {"name": f"Chain{size}", "objects": obs, "morphisms": mors, "identities": {a: f"id_{a}" for a in obs}, "comp": comp}
    )


def closure_chain(size: int = 3) -> GradedMonadData:
    C = chain_category(size)
    M = m2_monoidal()

    def arrow(a: str, b: str) -> str:
        return f"id_{a}" if a == b else f"{a}<{b}"

    def ob(m, c):
        return c if m == "0" else str(max(int(c), 1))

    T_ob = {(m, c): ob(m, c) for m in M.objects() for c in C.objects()}
    T_mor = {(m, f): arrow(ob(m, C.dom(f)), ob(m, C.cod(f))) for m in M.objects() for f in C.morphisms()}
    T_u = {(u, c): arrow(ob(M.dom(u), c), ob(M.cod(u), c)) for u in M.morphisms() for c in C.objects()}
    eta = {c: f"id_{c}" for c in C.objects()}
    mu = {
        (m, n, c): arrow(ob(m, ob(n, c)), ob(M.tensor_ob(m, n), c))
        for m in M.objects() for n in M.objects() for c in C.objects()
    }
    return GradedMonadData.from_tables(M, C, T_ob, T_mor, T_u, eta, mu, name=f"Closure{size}")


# ---------- Indexed families ----------


def constant_family(monad: MonadData, B: Optional[Category] = None, T_u: Optional[Callable[[Any, Any], Any]] = None) -> IndexedMonadData:
    B = B or walking_arrow()
    C = monad.base
    return IndexedMonadData(
        B, C,
        lambda b, c: monad.T_ob(c),
        lambda b, f: monad.T_mor(f),
        T_u or (lambda u, c: C.identity(monad.T_ob(c))),
        lambda b, c: monad.eta(c),
        lambda b, c: monad.mu(c),
        name=f"Const({monad.name})",
        objects=monad.objects,
        morphisms=monad.morphisms,
    )


def error_collapse_family(probe_max_size: Optional[int] = None) -> IndexedMonadData:
    t = exception_monad(1, probe_max_size)

    def T_u(u, X):
        TX = t.T_ob(X)
        if u in ("id_a", "id_b"):
            return t.base.identity(TX)
        return FinFunction(TX, TX, rule=lambda z: ("inr", "e0"), trusted=True)

    fam = constant_family(t, walking_arrow(), T_u)
    fam.name = "Const(Exc)~T_u"
    return fam


# ---------- Lookup by name ----------


def _state_graded(params):
    return build_state_monads(params.get("v"), params.get("n"), params.get("probe")).graded


def _state_indexed(params):
    return build_state_monads(params.get("v"), params.get("n"), params.get("probe")).indexed


GRADED_INSTANCES: Dict[str, Callable[[Dict[str, Any]], GradedMonadData]] = {
    "identity": lambda p: identity_graded(),
    "identity_z2": lambda p: identity_graded(z2_monoidal()),
    "exception_m2": lambda p: exception_m2(p.get("errors", 1), p.get("probe"), bool(p.get("mutate", False))),
    "writer_z2": lambda p: writer_z2(bool(p.get("mutate", False)), p.get("probe")),
    "writer": lambda p: writer_graded(probe_max_size=p.get("probe")),
    "closure_chain": lambda p: closure_chain(p.get("size", 3)),
    "exception": lambda p: graded_over_terminal(exception_monad(p.get("errors", 1), p.get("probe"))),
    "state": _state_graded,
}

MONAD_INSTANCES: Dict[str, Callable[[Dict[str, Any]], MonadData]] = {
    "identity": lambda p: identity_monad(),
    "exception": lambda p: exception_monad(p.get("errors", 1), p.get("probe")),
    "writer": lambda p: writer_monad(probe_max_size=p.get("probe")),
    "magma_writer": lambda p: magma_writer(p.get("probe")),
}

INDEXED_INSTANCES: Dict[str, Callable[[Dict[str, Any]], IndexedMonadData]] = {
    "constant_exception": lambda p: constant_family(exception_monad(p.get("errors", 1), p.get("probe"))),
    "constant_identity": lambda p: constant_family(identity_monad()),
    "constant_writer": lambda p: constant_family(writer_monad(probe_max_size=p.get("probe"))),
    "state": _state_indexed,
}


def instance(kind: str, name: str, params: Optional[Dict[str, Any]] = None):
    table = {"graded": GRADED_INSTANCES, "monad": MONAD_INSTANCES, "indexed": INDEXED_INSTANCES}.get(kind)
    if table is None:
        raise SpecError(f"unknown instance kind {kind!r}")
    if name not in table:
        raise SpecError(f"unknown {kind} instance {name!r}", [f"known: {', '.join(sorted(table))}"])
    log.info("instance %s/%s %s", kind, name, params or {})
    return table[name](params or {})
