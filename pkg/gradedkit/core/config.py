import json
import os
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Any, Dict, Optional

from gradedkit.core.paths import config_path

ENV_MAX_MORPHISMS = "GMK_MAX_MORPHISMS"


@dataclass
class ToolkitConfig:
    max_morphisms: int = 10_000
    max_elements: int = 100_000
    probe_max_size: int = 2
    state_values: int = 2
    inj_bound: int = 2
    max_grade: int = 3
    micro_em_cells: int = 6
    perturbations: int = 20
    seed: int = 0

    output_format: str = "text"
    log_level: str = "WARNING"

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "ToolkitConfig":
        p = path or config_path()
        cfg = cls()
        if p.exists():
            try:
                data = json.loads(p.read_text(encoding="utf-8"))
            except Exception:
                data = {}
            if not isinstance(data, dict):
                data = {}
            for k, v in data.items():
                if hasattr(cfg, k):
                    setattr(cfg, k, v)

        env = os.environ.get(ENV_MAX_MORPHISMS)
        if env:
            try:
                cfg.max_morphisms = int(env)
            except ValueError:
                pass
        return cfg

    def save(self, path: Optional[Path] = None):
        p = path or config_path()
        p.write_text(json.dumps(asdict(self), ensure_ascii=False, indent=2), encoding="utf-8")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_active: Optional[ToolkitConfig] = None


def active_config() -> ToolkitConfig:
    global _active
    if _active is None:
        _active = ToolkitConfig.load()
    return _active


def set_active_config(cfg: Optional[ToolkitConfig]):
    global _active
    _active = cfg
