import json

import pytest

from gradedkit.core.errors import SpecError
from gradedkit.core.graded import GradedComonadData, GradedMonadData
from gradedkit.core.indexed import IndexedComonadData, IndexedMonadData, MonadData
from gradedkit.core.kleisli import KleisliCategory
from gradedkit.core.specfiles import (
    category_document,
    check_loaded,
    load_instance,
    load_spec,
    read_json,
    revalidate,
    spec_kind,
    write_document,
)
from gradedkit.core.zoo import exception_m2

KINDS = {
    "exception_m2.json": GradedMonadData,
    "exception.json": MonadData,
    "constant_exception.json": IndexedMonadData,
    "coexception_m2.json": GradedComonadData,
    "coconstant_exception.json": IndexedComonadData,
}


@pytest.mark.parametrize("name, cls", sorted(KINDS.items()))
def test_instance_specs_load(specs, name, cls):
    spec = load_spec(specs / name)
    assert isinstance(spec.value, cls)
    assert spec.source_hash


def test_comonad_spec_is_a_dual(specs):
    spec = load_spec(specs / "coexception_m2.json")
    assert spec.name.endswith("^op")
    assert check_loaded(spec).passed


def test_category_spec_with_monoidal_block(specs):
    spec = load_spec(specs / "m2_max.json")
    assert spec.kind == "category"
    rep = check_loaded(spec)
    assert rep.passed
    assert any(e.axiom.startswith("monoidal ") for e in rep.entries)


def test_bad_unit_loads_but_fails(specs):
    rep = check_loaded(load_spec(specs / "bad_unit.json"))
    assert not rep.passed


def test_malformed_category_lists_problems(specs):
    with pytest.raises(SpecError) as err:
        load_spec(specs / "malformed.json")
    assert len(err.value.errors) >= 2


def test_truncated_json(specs):
    with pytest.raises(SpecError) as err:
        read_json(specs / "truncated.json")
    assert "line" in err.value.errors[0]


def test_missing_file(tmp_path):
    with pytest.raises(SpecError):
        read_json(tmp_path / "absent.json")


def test_top_level_must_be_an_object(tmp_path):
    p = tmp_path / "list.json"
    p.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(SpecError):
        read_json(p)


@pytest.mark.parametrize(
    "raw",
    [
        {"kind": "sheaf"},
        {"kind": "graded"},
        {"kind": "graded", "instance": "exception_m2", "colour": "red"},
        {"kind": "graded", "instance": "exception_m2", "params": [1]},
        {"kind": "graded_comonad", "instance": "exception_m2"},
        {"kind": "mutation", "name": "GM9"},
    ],
)
def test_rejected_instance_specs(raw):
    with pytest.raises(SpecError):
        load_instance(raw)


def test_objects_key_means_category():
    assert spec_kind({"objects": []}) == "category"


def test_mutation_spec_passes_when_caught(specs):
    rep = check_loaded(load_spec(specs / "mutation_gm6.json"))
    assert rep.passed


def test_built_category_round_trips(tmp_path):
    kl = KleisliCategory(exception_m2(probe_max_size=1))
    doc = category_document(kl, "kl-graded")
    assert doc["provenance"]["construction"] == "kl-graded"
    fc = revalidate(doc)
    out = tmp_path / "kl.json"
    write_document(doc, out)
    again = revalidate(json.loads(out.read_text(encoding="utf-8")))
    assert len(again.morphisms()) == len(fc.morphisms())
    assert set(doc["provenance"]["labels"]) == set(fc.objects()) | set(fc.morphisms())
