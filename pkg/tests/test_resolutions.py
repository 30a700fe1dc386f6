import pytest

from gradedkit.core.errors import PreconditionError
from gradedkit.core.resolutions import (
    em_resolution,
    kl_resolution,
    resolve,
    terminal_initial_witness,
    validate_resolution,
)
from gradedkit.core.zoo import exception_m2


@pytest.fixture(scope="module")
def exc():
    return exception_m2(probe_max_size=1)


def test_both_canonical_resolutions(exc):
    em_res, kl_res, rep = resolve(exc, audit=False)
    assert rep.passed, rep.failures()[:3]
    axioms = {e.axiom for e in rep.entries}
    assert any(a.startswith("EM: ") for a in axioms)
    assert "Kl: composite equals direct" in axioms


def test_em_resolution_witnesses_are_audited(exc):
    w = terminal_initial_witness(em_resolution(exc), exc, count=3)
    assert w.passed, w.report.failures()[:3]
    assert any(e.axiom == "terminal uniqueness" for e in w.report.entries)


def test_resolution_of_another_monad_is_refused(exc):
    other = exception_m2(error_size=2, probe_max_size=1)
    res = kl_resolution(exc)
    assert not validate_resolution(res, other).passed
    with pytest.raises(PreconditionError):
        terminal_initial_witness(res, other, audit=False)
