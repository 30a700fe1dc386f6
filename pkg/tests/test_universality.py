from dataclasses import replace

import pytest

from gradedkit.core.em_graded import em_graded_adjunction
from gradedkit.core.em_indexed import em_indexed_adjunction
from gradedkit.core.errors import PreconditionError, SpecError
from gradedkit.core.kleisli import kl_adjunction
from gradedkit.core.resolutions import kl_resolution
from gradedkit.core.universality import (
    check_left_module,
    check_left_module_morphism,
    em_indexed_comparison,
    factorize_module,
    factorize_module_morphism,
    identity_left_module_morphism,
    left_module_of_resolution,
    shift_module_morphism,
    universal_indexed_module,
    universal_left_module,
    universal_right_module,
)
from gradedkit.core.zoo import constant_family, exception_m2, exception_monad


@pytest.fixture(scope="module")
def exc():
    return exception_m2(probe_max_size=1)


def test_universal_left_module_factors_through_itself(exc):
    mod = universal_left_module(em_graded_adjunction(exc))
    fac = factorize_module("em-graded", mod, count=5)
    assert fac.passed, fac.report.failures()[:3]
    a = mod.objects[0]
    assert fac.ob(a) == a
    assert fac.audit is not None and len(fac.audit) > 0


def test_universal_right_module_factors_through_itself(exc):
    adj = kl_adjunction(exc)
    mod = universal_right_module(adj)
    fac = factorize_module("kl-graded", mod, count=5, kleisli=adj.category)
    assert fac.passed, fac.report.failures()[:3]
    x = adj.category.objects()[0]
    assert fac.ob(x) == x


def test_universal_indexed_module_factors_through_itself():
    adj = em_indexed_adjunction(constant_family(exception_monad(1, 1)))
    mod = universal_indexed_module(adj)
    fac = factorize_module("em-indexed", mod, count=5)
    assert fac.passed, fac.report.failures()[:3]


def test_uniqueness_audit_is_seeded(exc):
    mod = universal_left_module(em_graded_adjunction(exc))
    first = factorize_module("em-graded", mod, count=4, seed=7).audit.to_list()
    second = factorize_module("em-graded", mod, count=4, seed=7).audit.to_list()
    assert first == second


def test_unknown_kind():
    with pytest.raises(SpecError):
        factorize_module("em-cofree", None)


def test_module_breaking_its_equations_is_refused(exc):
    mod = universal_left_module(em_graded_adjunction(exc))
    unit = exc.grading.unit
    broken = replace(mod, gamma=lambda m, a: mod.gamma(unit, a), name="flat")
    assert not check_left_module(broken).passed
    with pytest.raises(PreconditionError, match="module flat fails") as err:
        factorize_module("em-graded", broken, audit=False)
    assert err.value.report is not None and not err.value.report.passed


def test_kleisli_module_factorizes_into_algebras(exc):
    res = kl_resolution(exc)
    mod = left_module_of_resolution(exc, res)
    assert check_left_module(mod).passed
    fac = factorize_module("em-graded", mod, count=3)
    assert fac.passed, fac.report.failures()[:3]
    c = exc.base.sample_objects()[-1]
    free = em_graded_adjunction(exc).free(exc.grading.unit, c)
    assert fac.ob(res.adj.left.ob(c)) == free


def test_identity_module_morphism(exc):
    mod = universal_left_module(em_graded_adjunction(exc))
    mm = identity_left_module_morphism(mod)
    assert check_left_module_morphism(mm).passed
    assert factorize_module_morphism("em-graded", mm, audit=False).passed


def test_module_morphism_with_a_mistyped_component_is_refused(exc):
    mod = universal_left_module(em_graded_adjunction(exc))
    broken = replace(identity_left_module_morphism(mod), omega=lambda a: exc.T_u("le", mod.g.ob(a)), name="lift")
    assert not check_left_module_morphism(broken).passed
    with pytest.raises(PreconditionError, match="lift"):
        factorize_module_morphism("em-graded", broken, audit=False)


def test_shift_module_morphism(exc):
    adj = em_graded_adjunction(exc)
    mm = shift_module_morphism(adj, "le")
    assert check_left_module_morphism(mm).passed
    two_cell = factorize_module_morphism("em-graded", mm, count=3)
    assert two_cell.passed, two_cell.report.failures()[:3]


def test_shift_needs_a_morphism_out_of_the_unit(exc):
    with pytest.raises(PreconditionError):
        shift_module_morphism(em_graded_adjunction(exc), "id_1")


def test_indexed_comparison_from_the_em_adjunction():
    fam = constant_family(exception_monad(1, 1))
    adj = em_indexed_adjunction(fam)
    fac = em_indexed_comparison(fam, adj.as_adjunction(), count=3)
    assert fac.passed, fac.report.failures()[:3]
    x = adj.category.objects()[0]
    assert fac.ob(x) == x
