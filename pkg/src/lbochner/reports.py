"""Check reports and their deterministic JSON/CSV rendering.

Reports keep exact Python objects (Fractions, algebra elements, brackets) in
their detail dicts; conversion to documents happens only at dump time.  No
binary floating point ever reaches a persisted artifact: rationals become
"num/den" strings and approximations become (value, error-bound) pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

TOOL_VERSION = "lbochner 0.1.0"


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    series: Optional[List[Dict[str, Any]]] = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    checks: List[CheckReport]
    tool: str = TOOL_VERSION

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def to_jsonable(obj: Any) -> Any:
    """Recursive conversion to JSON-safe values; duck-typed so the core
    modules never need to import this one."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        raise TypeError("binary floating point is not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    # ApproxReal
    if hasattr(obj, "abs_error_bound") and hasattr(obj, "value"):
        return {"value": format_rational(obj.value),
                "error_bound": format_rational(obj.abs_error_bound)}
    # LElement
    if hasattr(obj, "coords") and hasattr(obj, "nums"):
        return [format_rational(q) for q in obj.coords]
    # ModuleVector / Functional
    if hasattr(obj, "entries"):
        return [to_jsonable(e) for e in obj.entries]
    if hasattr(obj, "coeffs"):
        return [to_jsonable(c) for c in obj.coeffs]
    # enums
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return to_jsonable(obj.value)
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def check_to_doc(check: CheckReport) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "name": check.name,
        "verdict": "PASS" if check.passed else "FAIL",
        "details": to_jsonable(check.details),
    }
    if check.witness is not None:
        doc["witness"] = to_jsonable(check.witness)
    if check.series is not None:
        doc["series"] = to_jsonable(check.series)
    return doc


def report_to_doc(report: Report) -> Dict[str, Any]:
    return {
        "tool": report.tool,
        "command": report.command,
        "config": to_jsonable(report.config),
        "verdict": "PASS" if report.passed else "FAIL",
        "checks": [check_to_doc(c) for c in report.checks],
    }


def report_to_json_bytes(report: Report) -> bytes:
    doc = report_to_doc(report)
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return ";".join(_cell(v) for v in value)
    return json.dumps(value)


def _flatten_row(row: Dict[str, Any]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for key, value in row.items():
        jv = to_jsonable(value)
        if isinstance(jv, list):
            for i, item in enumerate(jv):
                out[f"{key}_{i}"] = _cell(item)
        else:
            out[key] = _cell(jv)
    return out


def series_to_csv(rows: Sequence[Dict[str, Any]]) -> str:
    """Plot-ready CSV: one column per scalar field, list-valued fields
    expanded into numbered columns, rationals as num/den strings."""
    flat = [_flatten_row(r) for r in rows]
    headers: List[str] = []
    for fr in flat:
        for key in fr:
            if key not in headers:
                headers.append(key)
    lines = [",".join(headers)]
    for fr in flat:
        lines.append(",".join(fr.get(h, "") for h in headers))
    return "\n".join(lines) + "\n"
