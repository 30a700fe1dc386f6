import json

import pytest
from typer.testing import CliRunner

from gradedkit.cli.app import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, app
from gradedkit.core.config import ToolkitConfig
from gradedkit.core.specfiles import revalidate

runner = CliRunner()


@pytest.fixture(autouse=True)
def small_config(monkeypatch):
    monkeypatch.setattr(ToolkitConfig, "load", classmethod(lambda cls, path=None: cls(probe_max_size=1, perturbations=3)))


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def test_check_lawful_graded_monad(specs):
    result = invoke("check", specs / "exception_m2.json")
    assert result.exit_code == EXIT_PASS, result.output
    assert "PASS" in result.output


def test_check_reports_the_broken_axiom(specs):
    result = invoke("check", specs / "broken_gm6.json")
    assert result.exit_code == EXIT_FAIL
    assert "FAIL GM6" in result.output


def test_check_json_payload(specs):
    result = invoke("check", specs / "broken_gm6.json", "--format", "json")
    payload = json.loads(result.stdout)
    assert payload["passed"] is False
    assert {e["axiom"] for e in payload["entries"] if e["status"] == "fail"} == {"GM6"}


@pytest.mark.parametrize(
    "name", ["walking_arrow.json", "m2_max.json", "z2.json", "coexception_m2.json", "mutation_gm6.json", "indexed_state.json"]
)
def test_check_passing_specs(specs, name):
    assert invoke("check", specs / name).exit_code == EXIT_PASS


def test_check_bad_unit_fails(specs):
    assert invoke("check", specs / "bad_unit.json").exit_code == EXIT_FAIL


@pytest.mark.parametrize("name", ["malformed.json", "truncated.json", "absent.json"])
def test_rejected_inputs(specs, name):
    assert invoke("check", specs / name).exit_code == EXIT_INPUT


def test_rejected_input_as_json(specs):
    result = invoke("check", specs / "malformed.json", "-f", "json")
    assert result.exit_code == EXIT_INPUT
    payload = json.loads(result.stdout)
    assert payload["error"] == "SpecError"
    assert payload["errors"]


def test_kind_mismatch(specs):
    assert invoke("check", specs / "exception_m2.json", "--kind", "indexed").exit_code == EXIT_INPUT


def test_build_kleisli_to_file(specs, tmp_path):
    out = tmp_path / "kl.json"
    result = invoke("build", specs / "exception_m2.json", "kl-graded", "--out", out)
    assert result.exit_code == EXIT_PASS, result.output
    assert result.stdout.startswith(f"wrote {out}")
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["provenance"]["source_name"] == "Exc_M2[E=1]"
    revalidate(doc)


def test_build_into_a_directory(specs, tmp_path):
    result = invoke("build", specs / "exception.json", "kl-graded", "-o", tmp_path)
    assert result.exit_code == EXIT_PASS, result.output
    written = list(tmp_path.glob("exception_kl-graded_*.json"))
    assert len(written) == 1
    revalidate(json.loads(written[0].read_text(encoding="utf-8")))


@pytest.mark.parametrize(
    "name, construction",
    [
        ("identity.json", "em-graded"),
        ("exception.json", "kl-graded"),
        ("constant_exception.json", "em-indexed"),
        ("constant_exception.json", "sections"),
        ("coexception_m2.json", "co-kl"),
        ("coconstant_exception.json", "co-em"),
    ],
)
def test_build_to_stdout(specs, name, construction):
    result = invoke("build", specs / name, construction)
    assert result.exit_code == EXIT_PASS, result.output
    assert json.loads(result.stdout)["provenance"]["construction"] == construction


def test_build_refuses_unlawful_input(specs):
    assert invoke("build", specs / "broken_gm6.json", "kl-graded").exit_code == EXIT_INPUT


def test_build_refuses_wrong_construction(specs):
    assert invoke("build", specs / "exception_m2.json", "em-indexed").exit_code == EXIT_INPUT


def test_build_respects_max_morphisms(specs):
    assert invoke("build", specs / "exception_m2.json", "kl-graded", "--max-morphisms", "3").exit_code == EXIT_INPUT


def test_state_demo():
    result = invoke("state-demo", "--probe", "1")
    assert result.exit_code == EXIT_PASS, result.output
    assert result.stdout.startswith("state monads |V|=2, N=2: PASS")


def test_effect_run(programs):
    result = invoke("effect", "run", programs / "p08_swap_via_temp.efl", "--store", "0,0,1")
    assert result.exit_code == EXIT_PASS
    assert "store: (1, 0, 0)" in result.output


def test_effect_run_json(programs):
    result = invoke("effect", "run", programs / "p07_copy.efl", "--store", "1,0", "-f", "json")
    payload = json.loads(result.stdout)
    assert payload["agrees_with_denotation"] is True


def test_effect_run_bad_store(programs):
    assert invoke("effect", "run", programs / "p07_copy.efl", "--store", "1,x").exit_code == EXIT_INPUT
    assert invoke("effect", "run", programs / "p07_copy.efl", "--store", "1").exit_code == EXIT_INPUT


def test_effect_denote(programs):
    result = invoke("effect", "denote", programs / "p07_copy.efl", "-f", "json")
    assert result.exit_code == EXIT_PASS
    payload = json.loads(result.stdout)
    assert len(payload["table"]) == 2 ** payload["footprint"]


def test_effect_check_corpus(programs):
    result = invoke("effect", "check", programs, "--width", "2")
    assert result.exit_code == EXIT_PASS, result.output
    assert "programs: 25" in result.output


def test_effect_syntax_error(tmp_path):
    p = tmp_path / "bad.efl"
    p.write_text("ret it", encoding="utf-8")
    result = invoke("effect", "run", p)
    assert result.exit_code == EXIT_INPUT


def test_resolve(specs):
    result = invoke("resolve", specs / "exception_m2.json")
    assert result.exit_code == EXIT_PASS, result.output
    assert "EM resolution:" in result.output


def test_non_string_endpoint_is_rejected_input(tmp_path):
    p = tmp_path / "listy.json"
    p.write_text(
        json.dumps({"objects": ["a"], "morphisms": [{"id": "i", "src": ["a"], "dst": "a"}], "identities": {"a": "i"}}),
        encoding="utf-8",
    )
    result = invoke("check", p)
    assert result.exit_code == EXIT_INPUT
    assert result.exception is None or isinstance(result.exception, SystemExit)


@pytest.mark.parametrize("name, construction", [("exception.json", "kl-graded"), ("coexception_m2.json", "co-kl")])
def test_build_audit_lists_class_members(specs, name, construction):
    plain = json.loads(invoke("build", specs / name, construction).stdout)
    assert "members" not in plain["provenance"]

    result = invoke("build", specs / name, construction, "--audit")
    assert result.exit_code == EXIT_PASS, result.output
    doc = json.loads(result.stdout)
    members = doc["provenance"]["members"]
    assert set(members) == {m["id"] for m in doc["morphisms"]}
    assert all(triples and all(len(t) == 3 for t in triples) for triples in members.values())
