from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from gradedkit.core.errors import CompositionError, OffGridError, SizeBoundError, TypingError
from gradedkit.core.utils import canonical_json, jsonable

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class LawEntry:
    axiom: str
    status: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def sort_key(self) -> Tuple[str, str]:
        return (self.axiom, canonical_json(self.witness))

    def to_dict(self) -> Dict[str, Any]:
        return {"axiom": self.axiom, "status": self.status, "witness": self.witness}


class LawReport:
    """
    Verdict list for a law suite: one entry per axiom instance.
    A report passes iff it has no FAIL entry; SKIPPED entries are neutral.
    """

    def __init__(self, subject: str = "", entries: Optional[Iterable[LawEntry]] = None):
        self.subject = subject
        self.entries: List[LawEntry] = list(entries or [])

    # ---------- Recording ----------

    def add(self, axiom: str, status: str, **witness: Any) -> LawEntry:
        e = LawEntry(axiom, status, jsonable(witness))
        self.entries.append(e)
        return e

    def ok(self, axiom: str, **witness: Any) -> LawEntry:
        return self.add(axiom, PASS, **witness)

    def fail(self, axiom: str, **witness: Any) -> LawEntry:
        return self.add(axiom, FAIL, **witness)

    def skip(self, axiom: str, **witness: Any) -> LawEntry:
        return self.add(axiom, SKIPPED, **witness)

    def check(self, axiom: str, cat, thunk: Callable[[], Tuple[Any, Any]], **witness: Any) -> bool:
        """
        Evaluate both sides of an equation of morphisms of `cat` and record the verdict.
        Tensors outside a partial grid and sides too large to list turn into SKIPPED;
        ill-typed sides are failures.
        """
        try:
            lhs, rhs = thunk()
            same = cat.equal(lhs, rhs)
        except (OffGridError, SizeBoundError) as e:
            self.skip(axiom, reason=str(e), **witness)
            return True
        except (TypingError, CompositionError) as e:
            self.fail(axiom, reason=f"ill-typed: {e}", **witness)
            return False
        if same:
            self.ok(axiom, **witness)
            return True
        element = cat.witness(lhs, rhs)
        if element is not None:
            witness = dict(witness, element=element)
        self.fail(axiom, lhs=lhs, rhs=rhs, **witness)
        return False

    def check_true(self, axiom: str, condition: bool, **witness: Any) -> bool:
        if condition:
            self.ok(axiom, **witness)
        else:
            self.fail(axiom, **witness)
        return bool(condition)

    def merge(self, other: "LawReport", prefix: str = "") -> "LawReport":
        for e in other.entries:
            self.entries.append(LawEntry(prefix + e.axiom, e.status, e.witness))
        return self

    def absorb(self, other: "LawReport", prefix: str = "", **context: Any) -> "LawReport":
        extra = jsonable(context)
        for e in other.entries:
            w = dict(e.witness)
            for k, v in extra.items():
                w[f"outer {k}" if k in w else k] = v
            self.entries.append(LawEntry(prefix + e.axiom, e.status, w))
        return self

    # ---------- Queries ----------

    @property
    def passed(self) -> bool:
        return not any(e.status == FAIL for e in self.entries)

    def failures(self) -> List[LawEntry]:
        return [e for e in self.sorted() if e.status == FAIL]

    def skipped(self) -> List[LawEntry]:
        return [e for e in self.sorted() if e.status == SKIPPED]

    def failed_axioms(self) -> List[str]:
        return sorted({e.axiom for e in self.entries if e.status == FAIL})

    def first_failure(self) -> Optional[LawEntry]:
        fs = self.failures()
        return fs[0] if fs else None

    def counts(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for e in self.entries:
            out[e.status] += 1
        return out

    def sorted(self) -> List[LawEntry]:
        return sorted(self.entries, key=LawEntry.sort_key)

    def to_list(self) -> List[Dict[str, Any]]:
        return [e.to_dict() for e in self.sorted()]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), ensure_ascii=False, indent=2)

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        c = self.counts()
        return f"LawReport({self.subject!r}, pass={c[PASS]}, fail={c[FAIL]}, skipped={c[SKIPPED]})"


class _ValueEquality:
    name = "values"

    def equal(self, a: Any, b: Any) -> bool:
        return a == b

    def witness(self, a: Any, b: Any) -> Optional[str]:
        return None


VALUES = _ValueEquality()
