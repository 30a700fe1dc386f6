import json

import pytest

from gradedkit.core.functors import validate_nat_trans
from gradedkit.core.graded import (
    check_graded_comonad,
    check_graded_monad,
    compare_lax_actions,
    dualize_graded,
    dualize_graded_comonad,
    graded_tables,
)
from gradedkit.core.zoo import GRADED_INSTANCES, exception_m2, instance, writer_graded, writer_z2

LAWFUL = ["identity", "identity_z2", "exception_m2", "writer_z2", "writer", "closure_chain", "exception"]
AXIOMS = {f"GM{i}" for i in range(1, 7)}


@pytest.mark.parametrize("name", LAWFUL)
def test_zoo_graded_monads_pass(name):
    rep = check_graded_monad(instance("graded", name, {"probe": 1}))
    assert rep.passed, rep.failures()[:3]
    assert AXIOMS <= {e.axiom for e in rep.entries}


def test_every_lawful_name_is_registered():
    assert set(LAWFUL) <= set(GRADED_INSTANCES)


def test_gm6_mutant_is_caught_with_witness():
    rep = check_graded_monad(writer_z2(mutate_mu=True, probe_max_size=1))
    assert rep.failed_axioms() == ["GM6"]
    first = rep.first_failure()
    assert first.witness["l"] and "element" in first.witness


def test_progress_reaches_completion():
    seen = []
    check_graded_monad(exception_m2(probe_max_size=1), on_progress=seen.append)
    assert seen == sorted(seen)
    assert seen[-1] == 100


def test_dual_is_a_lawful_comonad():
    gm = exception_m2(probe_max_size=1)
    gc = dualize_graded(gm)
    assert gc.name == "Exc_M2[E=1]^op"
    rep = check_graded_comonad(gc)
    assert rep.passed
    assert {"GC1", "GC6"} <= {e.axiom for e in rep.entries}


def test_dualizing_twice_keeps_every_table():
    gm = writer_z2(probe_max_size=1)
    back = dualize_graded_comonad(dualize_graded(gm))
    assert back.name == gm.name
    assert graded_tables(back) == graded_tables(gm)


def test_lax_action_view_has_the_same_tables():
    gm = exception_m2(probe_max_size=1)
    assert compare_lax_actions(gm.as_lax_action().as_graded_monad(), gm).passed


DUAL_CASES = {
    "lawful": lambda: exception_m2(probe_max_size=1),
    "outer tag": lambda: writer_graded(mu_override={("*", "*"): lambda a, b: a}, probe_max_size=1),
    "inner tag": lambda: writer_graded(mu_override={("*", "*"): lambda a, b: b}, probe_max_size=1),
    "z2 projection": lambda: writer_z2(mutate_mu=True, probe_max_size=1),
    "relabelled error": lambda: exception_m2(2, probe_max_size=1, mutate_mu=True),
}


@pytest.mark.parametrize("case", sorted(DUAL_CASES))
def test_dual_fails_the_matching_comonad_axioms(case):
    gm = DUAL_CASES[case]()
    monad = {a.replace("GM", "GC") for a in check_graded_monad(gm).failed_axioms()}
    comonad = set(check_graded_comonad(dualize_graded(gm)).failed_axioms())
    assert monad == comonad
    assert (case == "lawful") == (not monad)


def test_multiplication_is_natural():
    gm = exception_m2(probe_max_size=1)
    M = gm.grading
    for m in M.objects():
        for n in M.objects():
            assert validate_nat_trans(gm.mu_nat(m, n)).passed, (m, n)


def test_report_json_lists_the_witness():
    rep = check_graded_monad(writer_z2(mutate_mu=True, probe_max_size=1))
    entries = json.loads(rep.to_json())
    failed = [e for e in entries if e["status"] == "fail"]
    assert failed and all(e["axiom"] == "GM6" for e in failed)
    assert all(e["witness"] for e in failed)
