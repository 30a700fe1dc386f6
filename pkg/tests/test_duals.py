import pytest

from gradedkit.core.duals import (
    CoEMGradedCategory,
    CoKleisliCategory,
    cofree_coalgebra,
    dual_constructions,
    validate_graded_coalgebra,
)
from gradedkit.core.errors import PreconditionError
from gradedkit.core.graded import dualize_graded
from gradedkit.core.indexed import dualize_indexed_monad
from gradedkit.core.zoo import constant_family, exception_m2, exception_monad, writer_z2


@pytest.fixture(scope="module")
def coexc():
    return dualize_graded(exception_m2(probe_max_size=1))


def test_graded_duals_agree_with_the_opposites(coexc):
    out = dual_constructions(coexc)
    assert out.report.passed, out.report.failures()[:3]
    assert set(out.direct) == {"coEM", "coKl"}
    assert set(out.via_opposite) == set(out.direct)


def test_indexed_duals_agree_with_the_opposite():
    ic = dualize_indexed_monad(constant_family(exception_monad(1, 1)))
    out = dual_constructions(ic)
    assert out.report.passed, out.report.failures()[:3]
    assert "cocartesian lift" in {e.axiom for e in out.report.entries}


def test_cofree_coalgebras_validate(coexc):
    for p in coexc.grading.objects():
        for c in coexc.base.objects():
            assert validate_graded_coalgebra(coexc, cofree_coalgebra(coexc, p, c)).passed


def test_direct_categories_are_nonempty(coexc):
    assert CoEMGradedCategory(coexc).objects()
    assert CoKleisliCategory(coexc).objects()


def test_unlawful_comonad_is_refused():
    with pytest.raises(PreconditionError):
        dual_constructions(dualize_graded(writer_z2(mutate_mu=True, probe_max_size=1)))


def test_monad_is_not_a_comonad():
    with pytest.raises(PreconditionError):
        dual_constructions(exception_m2(probe_max_size=1))
