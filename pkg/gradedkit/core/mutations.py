from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Optional

from gradedkit.core.em_graded import graded_algebra, validate_graded_algebra, validate_graded_algebra_hom, GradedAlgebraHom
from gradedkit.core.finsets import FinFunction, FinSetCategory, probe_sets
from gradedkit.core.functors import identity_functor
from gradedkit.core.graded import AdjunctionData, check_adjunction, check_graded_comonad, check_graded_monad, dualize_graded
from gradedkit.core.indexed import check_indexed_comonad, check_indexed_monad, dualize_indexed_monad
from gradedkit.core.reports import LawReport
from gradedkit.core.zoo import constant_family, error_collapse_family, identity_graded, magma_writer, writer_graded, writer_monad, writer_z2

log = logging.getLogger(__name__)


@dataclass
class Mutation:
    name: str
    description: str
    run: Callable[[], LawReport]
    expected: FrozenSet[str]

    def verify(self) -> LawReport:
        result = self.run()
        failed = set(result.failed_axioms())
        first = result.first_failure()
        rep = LawReport(f"mutation {self.name}")
        rep.check_true(
            "caught exactly",
            failed == set(self.expected) and first is not None and bool(first.witness),
            expected=sorted(self.expected),
            failed=sorted(failed),
            witness=first.witness if first else None,
        )
        return rep


def _projection_writer(keep: str, probe: Optional[int]):
    rule = (lambda a, b: a) if keep == "left" else (lambda a, b: b)
    return writer_graded(mu_override={("*", "*"): rule}, probe_max_size=probe, name=f"Writer~{keep}")


def _x2(C: FinSetCategory):
    for X in C.objects():
        if len(X) == 2:
            return X
    raise LookupError("probe sets do not reach size 2")


def _algebra_unit_mutant() -> LawReport:
    gm = identity_graded()
    X = _x2(gm.base)
    zero = FinFunction(X, X, rule=lambda x: 0)
    a = graded_algebra(gm, {"*": X}, {}, {("*", "*"): zero}, name="const0")
    return validate_graded_algebra(gm, a)


def _algebra_assoc_mutant() -> LawReport:
    gm = writer_graded()
    X = _x2(gm.base)
    TX = gm.T_ob("*", X)
    h = FinFunction(TX, X, rule=lambda p: p[1] if p[0] == 0 else 0)
    a = graded_algebra(gm, {"*": X}, {}, {("*", "*"): h}, name="truncate")
    return validate_graded_algebra(gm, a)


def _hom_square_mutant() -> LawReport:
    gm = writer_graded()
    X = _x2(gm.base)
    TX = gm.T_ob("*", X)
    a = graded_algebra(gm, {"*": X}, {}, {("*", "*"): FinFunction(TX, X, rule=lambda p: p[0] ^ p[1])}, name="xor")
    b = graded_algebra(gm, {"*": X}, {}, {("*", "*"): FinFunction(TX, X, rule=lambda p: p[1])}, name="drop")
    return validate_graded_algebra_hom(gm, GradedAlgebraHom(a, b, {"*": FinFunction.identity(X)}))


def _triangle_mutant() -> LawReport:
    C = FinSetCategory(probe_sets(2))
    X = _x2(C)
    swap = FinFunction(X, X, rule=lambda x: 1 - x)
    idf = identity_functor(C)
    adj = AdjunctionData(idf, idf, C.identity, lambda a: swap if a == X else C.identity(a), name="id~swap")
    return check_adjunction(adj, [X], [X])


def mutations(probe_max_size: Optional[int] = None) -> List[Mutation]:
    p = probe_max_size
    return [
        Mutation("GM4", "terminal writer, mu keeps the outer tag", lambda: check_graded_monad(_projection_writer("left", p)), frozenset({"GM4"})),
        Mutation("GM5", "terminal writer, mu keeps the inner tag", lambda: check_graded_monad(_projection_writer("right", p)), frozenset({"GM5"})),
        Mutation("GM6", "Z/2 writer with mu_{1,1} a projection", lambda: check_graded_monad(writer_z2(True, p)), frozenset({"GM6"})),
        Mutation("IM3", "exception family whose T_u collapses to the error", lambda: check_indexed_monad(error_collapse_family(p)), frozenset({"IM3"})),
        Mutation(
            "IM5",
            "constant writer family, mu keeps the outer tag",
            lambda: check_indexed_monad(constant_family(writer_monad(mu_rule=lambda a, b: a, probe_max_size=p))),
            frozenset({"IM5"}),
        ),
        Mutation("IM7", "constant writer over a non-associative magma", lambda: check_indexed_monad(constant_family(magma_writer(p))), frozenset({"IM7"})),
        Mutation("GC4", "dual of the GM4 mutant", lambda: check_graded_comonad(dualize_graded(_projection_writer("left", p))), frozenset({"GC4"})),
        Mutation(
            "IC5",
            "dual of the IM5 mutant",
            lambda: check_indexed_comonad(dualize_indexed_monad(constant_family(writer_monad(mu_rule=lambda a, b: a, probe_max_size=p)))),
            frozenset({"IC5"}),
        ),
        Mutation("algebra-unit", "identity monad, structure map constantly 0", _algebra_unit_mutant, frozenset({"algebra unit"})),
        Mutation("algebra-assoc", "xor writer, h(1, x) = 0", _algebra_assoc_mutant, frozenset({"algebra associativity"})),
        Mutation("hom-square", "identity map between the xor and drop algebras", _hom_square_mutant, frozenset({"homomorphism square"})),
        Mutation("triangle", "identity adjunction with the swap as counit", _triangle_mutant, frozenset({"triangle left", "triangle right"})),
    ]


def run_mutations(probe_max_size: Optional[int] = None) -> LawReport:
    rep = LawReport("mutation sensitivity")
    for m in mutations(probe_max_size):
        rep.merge(m.verify(), prefix=f"{m.name}: ")
    log.info("mutation sensitivity: %s", rep.counts())
    return rep
