"""Residual reports shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class ResidualItem:
    subject: str
    residual: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"subject": self.subject}
        out.update(self.details)
        out["residual"] = self.residual
        out["pass"] = self.passed
        return out


@dataclass
class ResidualReport:
    command: str
    items: list[ResidualItem] = field(default_factory=list)
    runtime: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def summary(self) -> dict[str, int]:
        failed = sum(not it.passed for it in self.items)
        return {"total": len(self.items), "passed": len(self.items) - failed, "failed": failed}

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    @property
    def failures(self) -> list[ResidualItem]:
        return [it for it in self.items if not it.passed]

    def add(self, subject: str, residual, passed: bool, **details) -> None:
        self.items.append(ResidualItem(subject, str(residual), passed, details))

    def to_json(self, include_runtime: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command}
        out.update(self.meta)
        out["summary"] = self.summary
        out["pass"] = self.passed
        out["items"] = [it.to_json() for it in self.items]
        if include_runtime:
            out["runtime"] = round(self.runtime, 6)
        return out

    def to_text(self, verbose: bool = False) -> str:
        s = self.summary
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'} "
                 f"({s['passed']}/{s['total']} passed, {s['failed']} failed)"]
        for it in self.items if verbose else self.failures:
            mark = "ok  " if it.passed else "FAIL"
            lines.append(f"  {mark} {it.subject}: {it.residual}")
        return "\n".join(lines)
