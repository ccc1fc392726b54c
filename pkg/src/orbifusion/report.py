"""Validation reports shared by every checking operation."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check.

    ``deviation`` is the largest observed violation (0.0 for exact checks),
    ``witness`` pins the first offending place when the check failed.
    """

    name: str
    passed: bool
    deviation: float = 0.0
    witness: str | None = None
    detail: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{self.name}: {status}"]
        if self.deviation:
            parts.append(f"max deviation {self.deviation:.3e}")
        if self.witness:
            parts.append(f"at {self.witness}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass
class ValidationReport:
    """A list of check results; passes iff every check passed."""

    subject: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)

    def add(self, name: str, passed: bool, deviation: float = 0.0,
            witness: str | None = None, detail: str | None = None) -> None:
        self.checks.append(CheckResult(name, passed, deviation, witness, detail))

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        return [f"[{self.subject}]"] + ["  " + c.line() for c in self.checks]

    def __str__(self) -> str:
        return "\n".join(self.lines())
