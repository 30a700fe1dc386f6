import pytest

from gradedkit.core.em_graded import (
    EMGradedCategory,
    check_em_graded_adjunction,
    em_graded_adjunction,
    em_graded_enumerate,
    free_algebra,
    is_graded_algebra,
    validate_graded_algebra,
)
from gradedkit.core.errors import PreconditionError, SizeBoundError
from gradedkit.core.graded import check_strict_action
from gradedkit.core.zoo import exception_m2, identity_graded, instance


@pytest.fixture(scope="module")
def exc():
    return exception_m2(probe_max_size=1)


def test_identity_algebras_are_the_probe_sets():
    gm = identity_graded()
    em = em_graded_enumerate(gm)
    I = gm.grading.unit
    carriers = sorted(len(a.ob(I)) for a in em.objects())
    assert carriers == [0, 1, 2]
    by_size = {len(a.ob(I)): a for a in em.objects()}
    assert len(em.hom(by_size[1], by_size[2])) == 2
    assert len(em.hom(by_size[2], by_size[2])) == 4


def test_enumeration_respects_the_micro_bound():
    with pytest.raises(SizeBoundError):
        em_graded_enumerate(identity_graded(), max_cells=2)


def test_partial_grading_is_refused():
    with pytest.raises(PreconditionError):
        em_graded_enumerate(instance("graded", "state", {"probe": 0}))


def test_enumerated_exception_algebras_are_valid(exc):
    em = em_graded_enumerate(exc)
    assert em.objects()
    assert all(is_graded_algebra(exc, a) for a in em.objects())


@pytest.mark.parametrize("p", ["0", "1"])
def test_free_algebras_validate(exc, p):
    for c in exc.base.objects():
        rep = validate_graded_algebra(exc, free_algebra(exc, p, c))
        assert rep.passed, rep.failures()[:3]


def test_free_category_lists_free_algebras(exc):
    em = EMGradedCategory(exc)
    assert len(em.objects()) == len(exc.grading.objects()) * len(exc.base.objects())
    assert not em.enumerable


def test_em_adjunction_generates_the_monad(exc):
    rep = check_em_graded_adjunction(em_graded_adjunction(exc))
    assert rep.passed, rep.failures()[:3]


def test_em_action_is_strict(exc):
    adj = em_graded_adjunction(exc)
    em = adj.category
    rep = check_strict_action(adj.strict_action(), em.objects()[:2], em.sample_morphisms()[:4])
    assert rep.passed, rep.failures()[:3]
