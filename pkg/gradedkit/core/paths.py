from pathlib import Path


def base_dir() -> Path:
    return Path(__file__).resolve().parents[2]


def assets_dir() -> Path:
    return base_dir() / "assets"


def specs_dir() -> Path:
    return assets_dir() / "specs"


def programs_dir() -> Path:
    return assets_dir() / "programs"


def outputs_dir() -> Path:
    return base_dir() / "outputs"


def config_path() -> Path:
    return base_dir() / "config.json"


def ensure_dirs():
    outputs_dir().mkdir(parents=True, exist_ok=True)
