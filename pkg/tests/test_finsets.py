import pytest
from hypothesis import given, settings, strategies as st

from gradedkit.core.errors import CompositionError, SizeBoundError, TypingError
from gradedkit.core.finsets import FinFunction, FinSet, FinSetCategory, finset, probe_sets

X2, X3 = finset("X2", 2), finset("X3", 3)


def test_repeated_elements_are_refused():
    with pytest.raises(ValueError):
        FinSet("bad", [0, 0])


def test_function_outside_codomain():
    f = FinFunction(X2, finset("X1", 1), rule=lambda x: x)
    with pytest.raises(TypingError):
        f.values


def test_hom_enumerates_every_function(finsets):
    assert len(finsets.hom(X2, X2)) == 4
    assert len(finsets.hom(finset("X0", 0), X2)) == 1
    assert finsets.hom(X2, finset("X0", 0)) == []


def test_hom_size_bound():
    C = FinSetCategory(probe_sets(2), max_morphisms=3)
    with pytest.raises(SizeBoundError):
        C.hom(X2, X2)


def test_compose_checks_types(finsets):
    f = FinFunction(X2, X3, values=(0, 2))
    with pytest.raises(CompositionError):
        finsets.compose(f, f)


def test_witness_names_first_disagreement(finsets):
    ident = finsets.identity(X2)
    one = FinFunction(X2, X2, values=(1, 1))
    assert finsets.witness(ident, one) == "0: 0 vs 1"
    assert not finsets.equal(ident, one)


def test_rule_and_table_functions_compare_by_value():
    a = FinFunction(X3, X3, rule=lambda x: (x + 1) % 3)
    b = FinFunction(X3, X3, values=(1, 2, 0))
    assert a == b
    assert hash(a) == hash(b)


tables = st.lists(st.integers(min_value=0, max_value=2), min_size=3, max_size=3).map(tuple)


@settings(max_examples=50, deadline=None)
@given(tables, tables, tables)
def test_composition_is_associative(f, g, h):
    C = FinSetCategory([X3])
    f, g, h = (FinFunction(X3, X3, values=t) for t in (f, g, h))
    assert C.compose(h, C.compose(g, f)) == C.compose(C.compose(h, g), f)
    assert C.compose(C.identity(X3), f) == f
