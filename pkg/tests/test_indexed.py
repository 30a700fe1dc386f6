import pytest

from gradedkit.core.errors import PreconditionError, TypingError
from gradedkit.core.functors import validate_functor
from gradedkit.core.graded import check_graded_monad
from gradedkit.core.indexed import (
    MonadMorphism,
    check_indexed_comonad,
    check_indexed_monad,
    check_monad,
    check_monad_morphism,
    compose_monad_morphisms,
    dualize_indexed_comonad,
    dualize_indexed_monad,
    em_category,
    em_on_monad_morphism,
    graded_from_indexed,
    identity_monad_morphism,
    is_algebra,
)
from gradedkit.core.monoidal import m2_monoidal, z2_monoidal
from gradedkit.core.zoo import (
    MONAD_INSTANCES,
    constant_family,
    error_collapse_family,
    exception_monad,
    instance,
    magma_writer,
)


@pytest.mark.parametrize("name", sorted(MONAD_INSTANCES))
def test_ordinary_monads(name):
    rep = check_monad(instance("monad", name, {"probe": 1}))
    if name == "magma_writer":
        assert "associativity" in rep.failed_axioms()
        assert "left unit" not in rep.failed_axioms()
    else:
        assert rep.passed


@pytest.mark.parametrize("name", ["constant_exception", "constant_identity", "constant_writer"])
def test_constant_families_pass(name):
    rep = check_indexed_monad(instance("indexed", name, {"probe": 1}))
    assert rep.passed
    assert {f"IM{i}" for i in range(1, 8)} <= {e.axiom for e in rep.entries}


def test_collapsing_transition_breaks_unit_preservation():
    rep = check_indexed_monad(error_collapse_family(1))
    assert rep.failed_axioms() == ["IM3"]


def test_magma_family_breaks_associativity_only():
    rep = check_indexed_monad(constant_family(magma_writer(1)))
    assert rep.failed_axioms() == ["IM7"]


def test_dual_family_is_a_comonad_and_dualizes_back():
    fam = constant_family(exception_monad(1, 1))
    ic = dualize_indexed_monad(fam)
    assert check_indexed_comonad(ic).passed
    back = dualize_indexed_comonad(ic)
    assert back.name == fam.name
    assert check_indexed_monad(dualize_indexed_comonad(ic)).passed


def test_identity_transition_is_a_monad_morphism():
    fam = constant_family(exception_monad(1, 1))
    rep = check_monad_morphism(fam.morphism_at("u"))
    assert rep.passed


def test_monad_morphism_in_the_wrong_direction_is_a_typing_error():
    t = exception_monad(1, 1)
    C = t.base
    backwards = MonadMorphism(t, t, lambda c: C.identity(c))
    with pytest.raises(TypingError):
        check_monad_morphism(backwards)


def test_graded_monad_from_constant_family():
    M = m2_monoidal()
    fam = constant_family(exception_monad(1, 1), M.base)
    gm = graded_from_indexed(fam, M)
    assert check_graded_monad(gm).passed


def test_non_initial_unit_is_refused():
    M = z2_monoidal()
    fam = constant_family(exception_monad(1, 1), M.base)
    with pytest.raises(PreconditionError):
        graded_from_indexed(fam, M)


def test_identity_and_composite_monad_morphisms():
    t = exception_monad(1, 1)
    idm = identity_monad_morphism(t)
    assert check_monad_morphism(idm).passed
    assert check_monad_morphism(compose_monad_morphisms(idm, idm)).passed


def test_em_category_of_exception_monad():
    t = exception_monad(1, 2)
    em = em_category(t)
    # one algebra per choice of the error's image: none on the empty set
    assert [a.carrier.name for a in em.objects()] == ["X1", "X2", "X2"]
    assert all(is_algebra(t, a.carrier, a.structure) for a in em.objects())
    assert validate_functor(em_on_monad_morphism(identity_monad_morphism(t))).passed
