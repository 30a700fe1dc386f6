import pytest

from gradedkit.core.em_indexed import (
    check_em_indexed,
    check_fibration,
    em_indexed_adjunction,
    em_indexed_build,
    em_indexed_projection,
    is_cartesian,
    reindex,
)
from gradedkit.core.fincat import discrete_category, product_category, terminal_category, walking_arrow
from gradedkit.core.functors import ComputedFunctor, functor_category, identity_functor
from gradedkit.core.sections import check_sections, sections_category, sections_of_em_indexed
from gradedkit.core.zoo import constant_family, exception_monad


@pytest.fixture(scope="module")
def const_exc():
    return constant_family(exception_monad(1, 1))


@pytest.fixture(scope="module")
def em(const_exc):
    return em_indexed_build(const_exc)


def test_exception_algebras_over_each_index(em):
    # X0 carries no algebra; X1 carries exactly one
    assert len(em.over("a")) == 1
    assert len(em.over("b")) == 1
    assert {len(x.carrier) for x in em.objects()} == {1}


def test_em_indexed_suite_with_fibration(em):
    rep = check_em_indexed(em)
    assert rep.passed, rep.failures()[:3]
    assert "cartesian lift" in {e.axiom for e in rep.entries}


def test_reindexing_is_cartesian(em):
    im = em.im
    p = em_indexed_projection(em)
    y = em.over("b")[0]
    lift = reindex(im, "u", y)
    assert lift.dst == y and lift.src.index == "a"
    assert is_cartesian(em, p, lift)


def test_fibration_check_names_every_lift(em):
    rep = check_fibration(em, em_indexed_projection(em))
    assert rep.passed
    assert len(rep) == sum(1 for u in em.im.index.morphisms() for y in em.objects() if y.index == em.im.index.cod(u))


def test_free_objects_carry_mu(const_exc, em):
    adj = em_indexed_adjunction(const_exc, em)
    X1 = const_exc.base.objects()[1]
    x = adj.free(("a", X1))
    assert x.carrier == const_exc.T_ob("a", X1)
    assert adj.counit(x).u == "id_a"


def test_sections_match_algebra_families():
    # three algebras per index; a section is a homomorphism A_a -> A_b between two of them
    cmp = sections_of_em_indexed(constant_family(exception_monad(1, 2)))
    assert cmp.passed, cmp.report.failures()[:3]
    assert len(cmp.sections.objects()) == 13
    assert len(cmp.families.objects()) == 13


def test_sections_category_alone(em):
    sc = sections_category(em_indexed_projection(em))
    assert check_sections(sc).passed


def test_identity_projection_has_one_section():
    B = walking_arrow()
    sc = sections_category(identity_functor(B))
    [s] = sc.objects()
    assert all(s.ob(b) == b for b in B.objects())
    assert len(sc.morphisms()) == 1
    assert check_sections(sc).passed


def test_product_projection_sections_are_functors():
    B, X = walking_arrow("B"), walking_arrow("X")
    P = product_category(B, X)
    p = ComputedFunctor(P, B, lambda x: P.origin[x][0], lambda f: P.origin[f][0], name="pr")
    sc = sections_category(p)
    fc = functor_category(B, X)
    assert len(sc.objects()) == len(fc.objects()) == 3
    assert len(sc.morphisms()) == len(fc.morphisms())
    assert check_sections(sc).passed


def test_empty_fibre_leaves_no_sections():
    B = discrete_category(["x", "y"])
    p = ComputedFunctor(terminal_category(), B, lambda o: "x", lambda f: "id_x", name="at_x")
    assert sections_category(p).objects() == []
