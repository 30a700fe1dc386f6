import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedkit.core.effectlang import (
    UNIT,
    It,
    Lit,
    Read,
    Ret,
    Write,
    check_adequacy,
    check_layouts,
    denote,
    infer_effect,
    load_corpus,
    load_program,
    parse_program,
    rename_program,
    run,
    sequence,
    state_monads_for,
)
from gradedkit.core.errors import ProgramSyntaxError, SizeBoundError, TypingError
from gradedkit.core.statemonads import apply_state, stores


def test_parse_basic_program():
    p = parse_program("read 0; write 1 it # copy\n; ret 1")
    assert p.commands == (Read(0), Write(1, It()), Ret(Lit(1)))
    assert p.registers() == (0, 1)


@pytest.mark.parametrize(
    "text, values, line, column",
    [
        ("ret it", None, 1, 5),
        ("write 0 1; ret it", None, 1, 16),
        ("ret 2", 2, 1, 5),
        ("read 0;\nwrite 1 it;\nret 3", 2, 3, 5),
        ("read 0 + 1", None, 1, 8),
        ("read; ret 0", None, 1, 5),
        ("read 0 ret 0", None, 1, 8),
    ],
)
def test_syntax_errors_carry_positions(text, values, line, column):
    with pytest.raises(ProgramSyntaxError) as err:
        parse_program(text, values)
    assert (err.value.line, err.value.column) == (line, column)


def test_footprint_follows_first_use():
    g = infer_effect(parse_program("read 3; write 7 it; read 3; ret 1"))
    assert g.footprint == 2
    assert g.as_dict() == {3: 0, 7: 1}
    with pytest.raises(TypingError):
        g.position(5)


def test_run_swap_through_a_temporary(programs):
    p = load_program(programs / "p08_swap_via_temp.efl", 2)
    # store lists registers 0, 2, 1
    assert run(p, (0, 0, 1)) == ((1, 0, 0), UNIT)


def test_run_rejects_wrong_store_length():
    with pytest.raises(TypingError):
        run(parse_program("read 0; ret it"), (0, 1))


def test_denote_ret_is_pure():
    e = denote(parse_program("ret 1"))
    assert e.grade == 0
    assert apply_state(state_monads_for().values, e, ()) == ((), 1)


def test_denote_matches_run_on_reused_register():
    p = parse_program("read 0; write 0 1; read 0; ret it")
    sm = state_monads_for()
    e = denote(p, sm)
    assert e.grade == 1
    for w in stores(sm.values, 1):
        assert apply_state(sm.values, e, w) == run(p, w) == ((1,), 1)


def test_footprint_past_the_bound_is_refused():
    with pytest.raises(SizeBoundError):
        denote(parse_program("read 0; read 1; read 2; read 3"))


def test_corpus_is_adequate(programs):
    corpus = load_corpus(programs, 2)
    assert len(corpus) == 25
    rep = check_adequacy(corpus)
    assert rep.passed, rep.failures()[:3]
    assert len(rep) == sum(2 ** infer_effect(p).footprint for p in corpus)


@pytest.mark.parametrize("name", ["p07_copy", "p08_swap_via_temp", "p13_read_other", "p25_mixed"])
def test_layouts_agree(programs, name):
    p = load_program(programs / f"{name}.efl", 2)
    rep = check_layouts(p, 3)
    assert rep.passed, rep.failures()[:3]


def test_rename_must_be_injective():
    p = parse_program("read 0; write 1 it")
    assert rename_program(p, {0: 2, 1: 0}).registers() == (2, 0)
    with pytest.raises(TypingError):
        rename_program(p, {0: 1, 1: 1})


def test_sequence_of_disjoint_programs():
    sm = state_monads_for()
    first = denote(parse_program("write 0 1"), sm)
    second = denote(parse_program("read 5; ret it"), sm)
    both = sequence(sm, first, second)
    assert both.grade == 2
    assert apply_state(sm.values, both, (0, 0)) == ((1, 0), 0)


commands = st.one_of(
    st.builds(lambda r: f"read {r}", st.integers(0, 2)),
    st.builds(lambda r, v: f"write {r} {v}", st.integers(0, 2), st.integers(0, 1)),
    st.builds(lambda v: f"ret {v}", st.integers(0, 1)),
)


@settings(max_examples=40, deadline=None)
@given(st.lists(commands, min_size=1, max_size=5))
def test_random_programs_are_adequate(lines):
    p = parse_program("; ".join(lines), 2)
    assert check_adequacy([p]).passed
