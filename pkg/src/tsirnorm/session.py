"""Evaluation sessions: memo tables, work budgets, engine statistics."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["EvalSession", "BudgetExceededError"]


class BudgetExceededError(Exception):
    """The evaluation budget ran out.

    Carries the best certified lower bound found before giving up; the bound
    is a true lower bound, never an approximation of the exact value.
    """

    def __init__(self, message: str, lower_bound: Fraction | None = None):
        super().__init__(message)
        self.lower_bound = lower_bound


class EvalSession:
    """Per-computation scratch state.

    A session confines memoisation to one logical top-level evaluation; it is
    not shared between unrelated calls.  ``budget`` counts abstract work units
    (memo insertions and dynamic-programming transitions).
    """

    # Default generous budget: enough for every documented desk-scale path.
    DEFAULT_BUDGET = 20_000_000_000

    def __init__(self, budget: int | None = None):
        self.budget = self.DEFAULT_BUDGET if budget is None else budget
        self.used = 0
        self.memo: dict = {}
        self.stats = {
            "ranges_evaluated": 0,
            "dp_transitions": 0,
            "tables_built": 0,
            "families_enumerated": 0,
        }
        self._best_lower: Fraction = Fraction(0)

    def note_lower(self, value: Fraction) -> None:
        if value > self._best_lower:
            self._best_lower = value

    @property
    def best_lower(self) -> Fraction:
        return self._best_lower

    def charge(self, units: int, what: str = "dp_transitions") -> None:
        self.used += units
        if what in self.stats:
            self.stats[what] += units
        if self.used > self.budget:
            raise BudgetExceededError(
                f"work budget of {self.budget} units exhausted",
                lower_bound=self._best_lower,
            )

    def reset(self) -> None:
        self.used = 0
        self.memo.clear()
        for key in self.stats:
            self.stats[key] = 0
        self._best_lower = Fraction(0)
