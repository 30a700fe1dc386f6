import pytest

from gradedkit.core.config import ToolkitConfig, set_active_config
from gradedkit.core.finsets import FinSetCategory, probe_sets
from gradedkit.core.paths import programs_dir, specs_dir


@pytest.fixture(autouse=True)
def default_config(monkeypatch):
    """Every test sees the built-in defaults, never the local config.json."""
    monkeypatch.delenv("GMK_MAX_MORPHISMS", raising=False)
    cfg = ToolkitConfig()
    set_active_config(cfg)
    yield cfg
    set_active_config(None)


@pytest.fixture
def finsets():
    return FinSetCategory(probe_sets(2))


@pytest.fixture
def specs():
    return specs_dir()


@pytest.fixture
def programs():
    return programs_dir()
