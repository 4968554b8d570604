"""Shared result types for the checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check.

    ``witness`` holds the first violation in enumeration order, or ``None``
    when the check passed. ``checked`` counts the instances inspected.
    """

    ok: bool
    witness: Any = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def first_failure(cases, predicate) -> Verdict:
    """Run ``predicate`` over ``cases`` and stop at the first falsy result."""
    n = 0
    for case in cases:
        n += 1
        if not predicate(case):
            return Verdict(False, case, n)
    return Verdict(True, None, n)


class BudgetExceeded(Exception):
    """Raised before enumerating when the candidate count is over budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"{needed} candidates exceed budget {budget}")
        self.needed = needed
        self.budget = budget


class HypothesisFailed(ValueError):
    """A precondition of a theorem-level check does not hold."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Budget:
    """A shared candidate allowance spent across several enumerations."""

    limit: int
    spent: int = field(default=0)

    def spend(self, n: int) -> None:
        if self.spent + n > self.limit:
            raise BudgetExceeded(self.spent + n, self.limit)
        self.spent += n
