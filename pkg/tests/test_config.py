import pytest

from gradedkit.core.config import ENV_MAX_MORPHISMS, ToolkitConfig, active_config, set_active_config


def test_missing_file_gives_defaults(tmp_path):
    cfg = ToolkitConfig.load(tmp_path / "config.json")
    assert cfg == ToolkitConfig()


def test_save_and_load(tmp_path):
    p = tmp_path / "config.json"
    ToolkitConfig(probe_max_size=1, seed=9).save(p)
    cfg = ToolkitConfig.load(p)
    assert (cfg.probe_max_size, cfg.seed) == (1, 9)


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_unreadable_file_gives_defaults(tmp_path, text):
    p = tmp_path / "config.json"
    p.write_text(text, encoding="utf-8")
    assert ToolkitConfig.load(p) == ToolkitConfig()


def test_unknown_keys_are_ignored(tmp_path):
    p = tmp_path / "config.json"
    p.write_text('{"max_grade": 2, "colour": "blue"}', encoding="utf-8")
    cfg = ToolkitConfig.load(p)
    assert cfg.max_grade == 2
    assert "colour" not in cfg.to_dict()


def test_environment_overrides_max_morphisms(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_MAX_MORPHISMS, "77")
    assert ToolkitConfig.load(tmp_path / "config.json").max_morphisms == 77
    monkeypatch.setenv(ENV_MAX_MORPHISMS, "many")
    assert ToolkitConfig.load(tmp_path / "config.json").max_morphisms == 10_000


def test_active_config_is_replaceable():
    set_active_config(ToolkitConfig(max_grade=1))
    assert active_config().max_grade == 1
