from gradedkit.core.functors import validate_functor
from gradedkit.core.monoidal import is_commutative, m2_monoidal, terminal_monoidal, validate_strict_monoidal, z2_monoidal
from gradedkit.core.specfiles import load_spec


def test_named_gradings_are_strict_monoidal():
    for M in (terminal_monoidal(), z2_monoidal(), m2_monoidal()):
        assert validate_strict_monoidal(M).passed, M.name
        assert is_commutative(M)


def test_wrong_unit_fails_only_unitality():
    rep = validate_strict_monoidal(m2_monoidal(unit="1"))
    assert set(rep.failed_axioms()) == {"left unitality", "right unitality"}


def test_spec_file_matches_builtin(specs):
    M = load_spec(specs / "m2_max.json").value
    assert M.tables() == m2_monoidal().tables()
    assert validate_strict_monoidal(M).passed


def test_discrete_spec_without_tensor_mor(specs):
    M = load_spec(specs / "z2.json").value
    assert M.tensor_ob("1", "1") == "0"
    assert M.tensor_mor("id_1", "id_1") == "id_0"
    assert validate_strict_monoidal(M).passed


def test_tensor_is_a_functor():
    M = m2_monoidal()
    assert validate_functor(M.tensor_functor()).passed
