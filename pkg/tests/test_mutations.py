import pytest

from gradedkit.core.errors import SpecError
from gradedkit.core.mutations import mutations, run_mutations
from gradedkit.core.zoo import error_set, instance, product_set, sum_set

MUTANTS = [m.name for m in mutations(1)]


@pytest.mark.parametrize("name", MUTANTS)
def test_each_mutant_is_caught_by_its_axiom(name):
    m = next(m for m in mutations(1) if m.name == name)
    rep = m.verify()
    assert rep.passed, rep.entries[0].witness
    caught = m.run().first_failure()
    assert caught.axiom in m.expected


def test_mutation_table_covers_every_law_family():
    assert {"GM4", "GM5", "GM6", "IM3", "IM5", "IM7", "GC4", "IC5", "triangle"} <= set(MUTANTS)
    assert len(MUTANTS) == 12


def test_run_mutations_summarises():
    rep = run_mutations(1)
    assert rep.passed
    assert len(rep) == len(MUTANTS)
    assert all(e.axiom.endswith("caught exactly") for e in rep.entries)


def test_instance_lookup_errors():
    with pytest.raises(SpecError):
        instance("graded", "no_such_monad")
    with pytest.raises(SpecError):
        instance("sheaf", "identity")


def test_carrier_sets():
    X = error_set(2)
    assert len(sum_set(X, error_set(1))) == 3
    assert len(product_set(X, X)) == 4
