"""Structured pass/fail results shared by the checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class Report:
    name: str
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def fail(self, where, value=None):
        self.ok = False
        self.failures.append((where, value))

    def merge(self, other: "Report") -> "Report":
        self.ok = self.ok and other.ok
        self.checked += other.checked
        self.failures.extend((other.name, f) for f in other.failures)
        self.notes[other.name] = other.ok
        return self

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "failures": _plain(self.failures[:20]),
            "n_failures": len(self.failures),
            "notes": _plain(self.notes),
        }

    def summary(self) -> str:
        head = "%s: %s (%d checked)" % (self.name, "ok" if self.ok else "FAILED", self.checked)
        if self.ok:
            return head
        lines = [head] + ["  %s -> %s" % (w, v) for w, v in self.failures[:5]]
        if len(self.failures) > 5:
            lines.append("  ... %d more" % (len(self.failures) - 5))
        return "\n".join(lines)
