import pytest

from gradedkit.core.errors import PreconditionError
from gradedkit.core.kleisli import (
    KleisliCategory,
    KleisliObject,
    check_kl_decomposition,
    check_kleisli,
    kl_action,
    kl_adjunction,
    kl_build,
    kl_decompose,
    kl_hom_counts,
    kleisli_hom_count_oracle,
)
from gradedkit.core.zoo import exception_m2, exception_monad, graded_over_terminal, instance


@pytest.fixture(scope="module")
def exc_kl():
    return kl_build(exception_m2(probe_max_size=1))


def test_terminal_grading_matches_ordinary_kleisli():
    t = exception_monad(1, 2)
    kl = kl_build(graded_over_terminal(t))
    counts = {(a.obj, b.obj): n for (a, b), n in kl_hom_counts(kl).items()}
    assert counts == kleisli_hom_count_oracle(t)


def test_partial_grading_is_refused():
    with pytest.raises(PreconditionError):
        KleisliCategory(instance("graded", "state", {"probe": 0}))


def test_objects_pair_grades_with_objects(exc_kl):
    grades = {x.grade for x in exc_kl.objects()}
    assert grades == {"0", "1"}
    assert KleisliObject("1", exc_kl.objects()[0].obj) in exc_kl.objects()


def test_kleisli_laws_and_well_definedness(exc_kl):
    rep = check_kleisli(exc_kl)
    assert rep.passed, rep.failures()[:3]
    assert "composition well-defined" in {e.axiom for e in rep.entries}


def test_every_morphism_decomposes(exc_kl):
    rep = check_kl_decomposition(exc_kl)
    assert rep.passed, rep.failures()[:3]


def test_decomposition_passes_through_free_objects(exc_kl):
    a, b = exc_kl.objects()[1], exc_kl.objects()[-1]
    cls = exc_kl.hom(a, b)[0]
    first, second, third = kl_decompose(exc_kl, cls)
    assert first.src == cls.src
    assert third.dst == cls.dst
    assert second.dst == third.src


def test_action_shifts_the_grade(exc_kl):
    M = exc_kl.gm.grading
    x = next(o for o in exc_kl.objects() if o.grade == "0")
    cls = exc_kl.identity(x)
    moved = kl_action(exc_kl, "le", cls)
    assert moved.src.grade == "0" and moved.dst.grade == "1"
    assert kl_action(exc_kl, M.identity("1"), cls).src.grade == "1"


def test_counit_starts_at_a_free_object(exc_kl):
    adj = kl_adjunction(exc_kl.gm, exc_kl)
    x = exc_kl.objects()[-1]
    eps = adj.counit(x)
    assert eps.dst == x
    assert eps.src == adj.free(adj.forget(x))
    assert eps.src.grade == exc_kl.gm.grading.unit
