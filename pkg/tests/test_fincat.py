import pytest
from hypothesis import given, settings, strategies as st

from gradedkit.core.errors import CompositionError, SizeBoundError, SpecError
from gradedkit.core.fincat import (
    ProductCategory,
    category_law_errors,
    discrete_category,
    hom_count_table,
    opposite,
    product_category,
    tabulate,
    validate_category,
    walking_arrow,
)
from gradedkit.core.zoo import chain_category


def _one_object(comp):
    return {
        "name": "E",
        "objects": ["*"],
        "morphisms": [{"id": i, "src": "*", "dst": "*"} for i in ("id", "e", "f")],
        "identities": {"*": "id"},
        "comp": [{"g": g, "f": f, "result": r} for (g, f), r in comp.items()],
    }


def test_walking_arrow_tables():
    c = walking_arrow()
    assert c.objects() == ["a", "b"]
    assert c.hom("a", "b") == ["u"]
    assert c.hom("b", "a") == []
    assert c.compose("u", "id_a") == "u"
    assert c.compose("id_b", "u") == "u"


def test_compose_rejects_unknown_pair():
    c = walking_arrow()
    with pytest.raises(CompositionError):
        c.compose("u", "u")


def test_malformed_spec_lists_every_problem():
    raw = {
        "objects": ["a", "b"],
        "morphisms": [{"id": "id_a", "src": "a", "dst": "a"}, {"id": "f", "src": "a", "dst": "c"}],
        "identities": {"a": "id_a"},
    }
    with pytest.raises(SpecError) as e:
        validate_category(raw)
    joined = " ".join(e.value.errors)
    assert "unknown endpoint" in joined
    assert "missing identity for object b" in joined


def test_non_associative_table_is_rejected():
    comp = {("e", "e"): "id", ("e", "f"): "f", ("f", "e"): "e", ("f", "f"): "f"}
    with pytest.raises(SpecError) as e:
        validate_category(_one_object(comp))
    assert any("associativity" in err for err in e.value.errors)


def test_missing_composite_is_rejected():
    comp = {("e", "e"): "id", ("e", "f"): "f", ("f", "e"): "f"}
    with pytest.raises(SpecError) as e:
        validate_category(_one_object(comp))
    assert any("partial comp" in err for err in e.value.errors)


def test_unknown_keys_are_reported():
    raw = {"objects": ["a"], "morphisms": [{"id": "i", "src": "a", "dst": "a"}], "identities": {"a": "i"}, "colour": 1}
    with pytest.raises(SpecError, match="unknown keys"):
        validate_category(raw)


def test_size_bound_refuses():
    raw = walking_arrow().to_spec()
    with pytest.raises(SizeBoundError):
        validate_category(raw, max_morphisms=2)


def test_opposite_is_involutive():
    c = chain_category(3)
    op = opposite(c)
    assert op.name == "op(Chain3)"
    assert op.hom("1", "0") == c.hom("0", "1")
    back = opposite(op)
    assert back.same_tables(c)
    assert back.name == "Chain3"


def test_product_of_walking_arrows():
    fc, ob_ids, mor_ids = tabulate(ProductCategory(walking_arrow(), walking_arrow()))
    assert len(fc.objects()) == 4
    assert len(fc.morphisms()) == 9
    assert category_law_errors(fc) == []
    assert fc.identity(ob_ids[("a", "a")]) == mor_ids[("id_a", "id_a")]


def test_discrete_hom_counts():
    d = discrete_category(["x", "y"])
    assert hom_count_table(d) == {("x", "x"): 1, ("x", "y"): 0, ("y", "x"): 0, ("y", "y"): 1}


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=1, max_value=4))
def test_spec_roundtrip_on_chains(size):
    c = chain_category(size)
    assert validate_category(c.to_spec()).same_tables(c)
    assert len(c.morphisms()) == size * (size + 1) // 2


def test_product_category_is_tabulated():
    fc = product_category(walking_arrow(), walking_arrow())
    assert (len(fc.objects()), len(fc.morphisms())) == (4, 9)


@pytest.mark.parametrize(
    "raw",
    [
        {"objects": ["a"], "morphisms": [{"id": "i", "src": ["a"], "dst": "a"}], "identities": {"a": "i"}},
        {"objects": ["a"], "morphisms": [{"id": "i", "src": "a", "dst": "a"}], "identities": {"a": ["i"]}},
        {
            "objects": ["a"],
            "morphisms": [{"id": "i", "src": "a", "dst": "a"}],
            "identities": {"a": "i"},
            "comp": [{"g": ["i"], "f": "i", "result": "i"}],
        },
        {"objects": ["a"], "morphisms": [{"id": "i", "src": "a", "dst": "a"}], "identities": {"a": "i"}, "comp": 3},
    ],
)
def test_non_string_ids_are_spec_errors(raw):
    with pytest.raises(SpecError) as exc:
        validate_category(raw)
    assert exc.value.errors


def test_identity_of_unknown_object():
    with pytest.raises(CompositionError):
        walking_arrow().identity("z")
