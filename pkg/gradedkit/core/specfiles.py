from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from gradedkit.core.errors import SpecError
from gradedkit.core.fincat import Category, FiniteCategory, category_law_errors, tabulate, validate_category
from gradedkit.core.graded import GradedComonadData, GradedMonadData, check_graded_comonad, check_graded_monad, dualize_graded
from gradedkit.core.indexed import (
    IndexedComonadData,
    IndexedMonadData,
    MonadData,
    check_indexed_comonad,
    check_indexed_monad,
    check_monad,
    dualize_indexed_monad,
)
from gradedkit.core.monoidal import monoidal_from_tables, validate_strict_monoidal
from gradedkit.core.mutations import mutations
from gradedkit.core.reports import LawReport
from gradedkit.core.utils import describe, stable_hash
from gradedkit.core.zoo import instance

log = logging.getLogger(__name__)

KINDS = ("category", "graded", "indexed", "monad", "graded_comonad", "indexed_comonad", "mutation")
INSTANCE_KEYS = {"kind", "name", "instance", "dual_of", "params", "description"}


@dataclass
class LoadedSpec:
    kind: str
    name: str
    value: Any
    raw: Dict[str, Any]
    source: str = ""
    source_hash: str = ""
    notes: Dict[str, Any] = field(default_factory=dict)


def read_json(path: Path) -> Dict[str, Any]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SpecError(f"spec file {path} does not exist") from None
    except (OSError, UnicodeDecodeError) as e:
        raise SpecError(f"cannot read {path}", [str(e)]) from None
    except json.JSONDecodeError as e:
        raise SpecError(f"{path} is not valid JSON", [f"line {e.lineno}, column {e.colno}: {e.msg}"]) from None
    if not isinstance(raw, dict):
        raise SpecError(f"{path} must hold a JSON object")
    return raw


def spec_kind(raw: Dict[str, Any]) -> str:
    if "objects" in raw:
        return "category"
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SpecError("cannot tell what the spec describes", [f"kind must be one of {', '.join(KINDS)}, got {kind!r}"])
    return kind


def _params(raw: Dict[str, Any]) -> Dict[str, Any]:
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise SpecError("params must be an object")
    return params


def load_instance(raw: Dict[str, Any]) -> LoadedSpec:
    kind = spec_kind(raw)
    unknown = sorted(set(raw) - INSTANCE_KEYS)
    if unknown:
        raise SpecError(f"{kind} spec", [f"unknown keys {unknown}"])
    params = _params(raw)
    if kind == "mutation":
        name = raw.get("name")
        table = {m.name: m for m in mutations(params.get("probe"))}
        if name not in table:
            raise SpecError(f"unknown mutation {name!r}", [f"known: {', '.join(table)}"])
        return LoadedSpec(kind, name, table[name], raw)
    if kind in ("graded_comonad", "indexed_comonad"):
        base_kind = "graded" if kind == "graded_comonad" else "indexed"
        target = raw.get("dual_of")
        if not isinstance(target, str):
            raise SpecError(f"{kind} spec needs a string 'dual_of'")
        monad = instance(base_kind, target, params)
        value = dualize_graded(monad) if kind == "graded_comonad" else dualize_indexed_monad(monad)
    else:
        target = raw.get("instance")
        if not isinstance(target, str):
            raise SpecError(f"{kind} spec needs a string 'instance'")
        value = instance(kind, target, params)
    name = str(raw.get("name") or value.name)
    return LoadedSpec(kind, name, value, raw)


def load_category(raw: Dict[str, Any], max_morphisms: Optional[int] = None) -> LoadedSpec:
    body = {k: v for k, v in raw.items() if k not in ("monoidal", "provenance")}
    cat = validate_category(body, max_morphisms=max_morphisms)
    value: Category = cat
    notes: Dict[str, Any] = {}
    if "monoidal" in raw:
        if not isinstance(raw["monoidal"], dict):
            raise SpecError(f"category {cat.name}", ["monoidal must be an object"])
        value = monoidal_from_tables(cat, raw["monoidal"])
    if "provenance" in raw:
        notes["provenance"] = raw["provenance"]
    return LoadedSpec("category", cat.name, value, raw, notes=notes)


def load_spec(path: Path, max_morphisms: Optional[int] = None) -> LoadedSpec:
    raw = read_json(path)
    kind = spec_kind(raw)
    out = load_category(raw, max_morphisms) if kind == "category" else load_instance(raw)
    out.source = str(path)
    out.source_hash = stable_hash(raw)
    log.info("loaded %s spec %s from %s", out.kind, out.name, path)
    return out


def check_loaded(spec: LoadedSpec, on_progress=None) -> LawReport:
    v = spec.value
    if spec.kind == "category":
        rep = LawReport(f"category {spec.name}")
        rep.ok("category laws", objects=len(v.objects()), morphisms=len(v.morphisms()))
        if hasattr(v, "tensor_ob"):
            rep.merge(validate_strict_monoidal(v), prefix="monoidal ")
        return rep
    if spec.kind == "mutation":
        return v.verify()
    if isinstance(v, GradedMonadData):
        return check_graded_monad(v, on_progress=on_progress)
    if isinstance(v, GradedComonadData):
        return check_graded_comonad(v, on_progress=on_progress)
    if isinstance(v, IndexedMonadData):
        return check_indexed_monad(v, on_progress=on_progress)
    if isinstance(v, IndexedComonadData):
        return check_indexed_comonad(v, on_progress=on_progress)
    if isinstance(v, MonadData):
        return check_monad(v)
    raise SpecError(f"nothing to check for {spec.kind} spec {spec.name}")


# ---------- Emitting built categories ----------


def category_document(
    cat: Category,
    construction: str,
    source: Optional[LoadedSpec] = None,
    max_morphisms: Optional[int] = None,
    members: bool = False,
) -> Dict[str, Any]:
    """
    Tabulate and serialize with a provenance block; ids are deterministic labels.
    With `members`, quotient morphisms (Kleisli and co-Kleisli classes) also list every triple.
    """
    fc, ob_ids, mor_ids = tabulate(cat, max_morphisms=max_morphisms)
    doc = fc.to_spec()
    doc["provenance"] = {
        "construction": construction,
        "source": source.source if source else "",
        "source_name": source.name if source else "",
        "source_hash": source.source_hash if source else "",
        "labels": {i: describe(x) for x, i in list(ob_ids.items()) + list(mor_ids.items())},
    }
    if members:
        doc["provenance"]["members"] = {
            i: [[describe(part) for part in t] for t in x.members] for x, i in mor_ids.items() if getattr(x, "members", ())
        }
    return doc


def revalidate(doc: Dict[str, Any]) -> FiniteCategory:
    body = {k: v for k, v in doc.items() if k != "provenance"}
    cat = validate_category(body)
    problems = category_law_errors(cat)
    if problems:
        raise SpecError(f"emitted category {cat.name}", problems)
    return cat


def write_document(doc: Dict[str, Any], path: Path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, indent=2), encoding="utf-8")
