"""Law-check reports with replayable violation witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

PASS = "pass"
FAIL = "fail"


def plain(value: Any) -> Any:
    """Convert tuples, numpy scalars and arrays into JSON-friendly python values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, frozenset):
        return sorted((plain(v) for v in value), key=repr)
    return value


def witness_key(law: str, witness: tuple) -> tuple[str, str]:
    return (law, repr(plain(witness)))


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple

    def to_dict(self) -> dict:
        return {"law": self.law, "witness": plain(self.witness)}


@dataclass(frozen=True)
class LawReport:
    """Outcome of one law check.

    ``status`` is derived: a report fails exactly when it carries at least
    one violation.  ``n_violations`` counts every violation found, even
    when ``violations`` was capped.
    """

    check: str
    violations: tuple[Violation, ...] = ()
    cases: int = 0
    n_violations: int = 0
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return FAIL if self.violations else PASS

    @property
    def passed(self) -> bool:
        return not self.violations

    def laws_violated(self) -> set[str]:
        return {v.law for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "cases": self.cases,
            "n_violations": self.n_violations,
            "violations": [v.to_dict() for v in self.violations],
            "details": plain(self.details),
        }

    def __str__(self) -> str:
        head = f"{self.check}: {self.status} ({self.cases} cases"
        if self.violations:
            head += f", {self.n_violations} violations"
        head += ")"
        lines = [head]
        for v in self.violations[:10]:
            lines.append(f"  {v.law}: {plain(v.witness)}")
        return "\n".join(lines)


class Collector:
    """Mutable accumulator used while a checker runs; frozen by :meth:`report`."""

    def __init__(self, check: str, max_violations: int | None = None):
        self.check = check
        self.max_violations = max_violations
        self.cases = 0
        self._found: list[Violation] = []
        self.details: dict = {}

    def case(self, ok: bool, law: str, witness: Iterable = ()) -> bool:
        self.cases += 1
        if not ok:
            self._found.append(Violation(law, tuple(witness)))
        return ok

    def violation(self, law: str, witness: Iterable = ()) -> None:
        self._found.append(Violation(law, tuple(witness)))

    def report(self) -> LawReport:
        found = sorted(set(self._found), key=lambda v: witness_key(v.law, v.witness))
        kept = found if self.max_violations is None else found[: self.max_violations]
        return LawReport(self.check, tuple(kept), self.cases, len(found), dict(self.details))


def merge(check: str, reports: Iterable[LawReport]) -> LawReport:
    """Combine reports into one, keeping canonical witness order."""
    reports = list(reports)
    found = sorted(
        {v for r in reports for v in r.violations},
        key=lambda v: witness_key(v.law, v.witness),
    )
    return LawReport(
        check,
        tuple(found),
        sum(r.cases for r in reports),
        sum(r.n_violations for r in reports),
        {r.check: r.status for r in reports},
    )
