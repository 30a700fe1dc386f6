import hashlib
import json
import re
from datetime import datetime
from pathlib import Path
from typing import Any


def now_stamp() -> str:
    return datetime.now().strftime("%Y%m%d_%H%M%S")


def safe_stem(path: str) -> str:
    stem = Path(path).stem
    stem = re.sub(r"[^\w\-\.]+", "_", stem, flags=re.UNICODE)
    return stem[:80] if stem else "spec"


def describe(x: Any) -> str:
    if isinstance(x, str):
        return x
    label = getattr(x, "label", None)
    if callable(label):
        return label()
    if isinstance(x, tuple):
        return "(" + ", ".join(describe(i) for i in x) + ")"
    if isinstance(x, (frozenset, set)):
        return "{" + ", ".join(sorted(describe(i) for i in x)) + "}"
    return repr(x)


def jsonable(x: Any) -> Any:
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {describe(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, list):
        return [jsonable(i) for i in x]
    return describe(x)


def canonical_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def stable_hash(data: Any) -> str:
    return hashlib.sha256(canonical_json(jsonable(data)).encode("utf-8")).hexdigest()[:16]
