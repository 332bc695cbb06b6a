"""Condition-by-condition verdicts with failing witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator


@dataclass
class Report:
    """Named conditions mapped to their failing witness tuples.

    A condition with an empty witness list passed.  Conditions listed in
    ``skipped`` were not evaluated because a fail-fast run stopped early.
    """

    title: str
    conditions: dict[str, list] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped and all(not w for w in self.conditions.values())

    def __bool__(self) -> bool:
        return self.ok

    def passed(self, name: str) -> bool:
        return name in self.conditions and not self.conditions[name]

    def failed(self) -> list[str]:
        return [k for k, w in self.conditions.items() if w]

    def witnesses(self, name: str) -> list:
        return self.conditions[name]

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for k, w in other.conditions.items():
            self.conditions[prefix + k] = list(w)
        self.skipped.extend(prefix + k for k in other.skipped)
        self.notes.extend(other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "conditions": {
                k: {"pass": not w, "witnesses": [list(x) if isinstance(x, tuple) else x for x in w]}
                for k, w in self.conditions.items()
            },
            "skipped": list(self.skipped),
            "notes": list(self.notes),
        }

    def text(self, max_witnesses: int = 5) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for k, w in self.conditions.items():
            if w:
                shown = ", ".join(str(x) for x in w[:max_witnesses])
                more = f" (+{len(w) - max_witnesses} more)" if len(w) > max_witnesses else ""
                lines.append(f"  {k}: FAIL  witnesses: {shown}{more}")
            else:
                lines.append(f"  {k}: pass")
        for k in self.skipped:
            lines.append(f"  {k}: not evaluated")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


Check = Callable[[], Iterable]


def run_checks(title: str, checks: list[tuple[str, Check]], exhaustive: bool = True) -> Report:
    """Evaluate checks in order.

    Each check returns an iterable of witnesses.  With ``exhaustive=False``
    evaluation stops at the first witness found anywhere and the remaining
    checks are recorded as skipped.
    """
    report = Report(title)
    for pos, (name, check) in enumerate(checks):
        it: Iterator = iter(check())
        if exhaustive:
            report.conditions[name] = list(it)
            continue
        first = next(it, None)
        report.conditions[name] = [] if first is None else [first]
        if first is not None:
            report.skipped = [n for n, _ in checks[pos + 1:]]
            break
    return report
