"""Stable JSON report schema shared by the CLI and the golden-file tests.

Key order is fixed by construction and arrays are canonically sorted, so
identical inputs serialize to byte-identical text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

TOOL_VERSION = "0.1.0"
REPORT_FORMAT_VERSION = 1


@dataclass
class CheckResult:
    check: str
    status: str  # "pass" | "fail"
    witness: Optional[object] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def check(name: str, ok: bool, witness=None) -> CheckResult:
    return CheckResult(name, "pass" if ok else "fail", None if ok else witness)


@dataclass
class EntityReport:
    kind: str
    name: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness=None):
        self.checks.append(check(name, ok, witness))


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items.sort(key=repr)
        return items
    return repr(value)


def report_dict(reports: list[EntityReport]) -> dict:
    entities = []
    for er in sorted(reports, key=lambda r: (r.kind, r.name)):
        checks = []
        for c in sorted(er.checks, key=lambda c: c.check):
            entry = {"check": c.check, "status": c.status}
            if c.witness is not None:
                entry["witness"] = _jsonable(c.witness)
            checks.append(entry)
        entities.append({"kind": er.kind, "name": er.name, "checks": checks})
    npass = sum(c.passed for er in reports for c in er.checks)
    nfail = sum(not c.passed for er in reports for c in er.checks)
    return {
        "tool_version": TOOL_VERSION,
        "format_version": REPORT_FORMAT_VERSION,
        "entities": entities,
        "summary": {"pass": npass, "fail": nfail},
    }


def emit_report(reports: list[EntityReport]) -> str:
    return json.dumps(report_dict(reports), indent=2) + "\n"


def render_text(reports: list[EntityReport]) -> str:
    """Human-readable rendering with the same content as the JSON form."""
    lines = []
    for er in sorted(reports, key=lambda r: (r.kind, r.name)):
        lines.append(f"{er.kind} {er.name}")
        for c in sorted(er.checks, key=lambda c: c.check):
            mark = "ok  " if c.passed else "FAIL"
            suffix = f"  witness: {_jsonable(c.witness)}" if c.witness is not None else ""
            lines.append(f"  [{mark}] {c.check}{suffix}")
    npass = sum(c.passed for er in reports for c in er.checks)
    nfail = sum(not c.passed for er in reports for c in er.checks)
    lines.append(f"summary: {npass} passed, {nfail} failed")
    return "\n".join(lines) + "\n"
