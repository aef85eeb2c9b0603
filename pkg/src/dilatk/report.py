"""Verification reports shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL = "pass", "fail"


def _jsonable(x: Any):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return str(x)


@dataclass
class Check:
    name: str
    status: str = PASS
    witness: Any = None
    detail: str = ""
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.status == PASS


@dataclass
class VerificationReport:
    subject: str = ""
    checks: list[Check] = field(default_factory=list)
    examined: dict[str, int] = field(default_factory=dict)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name)
        self.checks.append(c)
        return c

    def passed(self, name: str, detail: str = "") -> Check:
        c = self.check(name)
        if detail and not c.detail:
            c.detail = detail
        return c

    def fail(self, name: str, witness: Any, detail: str = "") -> Check:
        """Record a violation; the first witness of each check is kept."""
        c = self.check(name)
        if c.status == PASS:
            c.status = FAIL
            c.witness = witness if witness is not None else "(unspecified)"
            c.detail = detail
        c.failures += 1
        return c

    def count(self, what: str, k: int = 1):
        self.examined[what] = self.examined.get(what, 0) + k

    def merge(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            name = prefix + c.name
            if c.ok:
                self.passed(name, c.detail)
            else:
                mine = self.fail(name, c.witness, c.detail)
                mine.failures += c.failures - 1
        for k, n in other.examined.items():
            self.count(k, n)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "status": c.status, "witness": _jsonable(c.witness),
                 "detail": c.detail, "failures": c.failures}
                for c in self.checks
            ],
            "examined": dict(self.examined),
        }

    def render(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if not c.ok:
                line += f"  witness={_jsonable(c.witness)}"
                if c.failures > 1:
                    line += f" (+{c.failures - 1} more)"
            if c.detail:
                line += f"  {c.detail}"
            lines.append(line)
        if self.examined:
            lines.append("  examined: " + ", ".join(f"{k}={v}" for k, v in sorted(self.examined.items())))
        return "\n".join(lines)
