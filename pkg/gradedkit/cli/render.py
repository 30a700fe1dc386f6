import json
from collections import Counter
from typing import Any, Dict, List

from gradedkit.core.reports import FAIL, PASS, SKIPPED, LawEntry, LawReport


def dumps(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2)


def report_payload(rep: LawReport) -> Dict[str, Any]:
    return {
        "subject": rep.subject,
        "passed": rep.passed,
        "counts": rep.counts(),
        "entries": rep.to_list(),
    }


def _witness(e: LawEntry) -> str:
    return ", ".join(f"{k}={json.dumps(v, ensure_ascii=False)}" for k, v in sorted(e.witness.items()))


def render_report(rep: LawReport, verbose: int = 0) -> str:
    """
    Verdict line, then every failure with its witness. Skipped entries are
    grouped by axiom unless verbose, when every entry is printed.
    """
    c = rep.counts()
    verdict = "PASS" if rep.passed else "FAIL"
    lines: List[str] = [f"{rep.subject}: {verdict} (pass {c[PASS]}, fail {c[FAIL]}, skipped {c[SKIPPED]})"]
    for e in rep.failures():
        lines.append(f"  FAIL {e.axiom}: {_witness(e)}")
    if verbose:
        for e in rep.sorted():
            if e.status != FAIL:
                lines.append(f"  {e.status} {e.axiom}: {_witness(e)}")
    else:
        for axiom, n in sorted(Counter(e.axiom for e in rep.skipped()).items()):
            lines.append(f"  skipped {axiom} x{n}")
    return "\n".join(lines)


def render_table(rows: List[List[str]], header: List[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*(str(x) for x in r)) for r in rows]
    return "\n".join(out)
