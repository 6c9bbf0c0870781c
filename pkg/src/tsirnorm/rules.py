"""Admissibility rules for the iterate recursion."""

from __future__ import annotations

from enum import Enum

__all__ = ["AdmissibilityRule"]


class AdmissibilityRule(Enum):
    """Which families enter the maximisation at step k+1.

    FIGIEL_JOHNSON: any number n of successive sets with n <= min E_1.
    PAPER_LITERAL: exactly k sets with k <= min E_1 (so at most k sets meet
    the support once empties are discarded, and the first must start at or
    beyond k).
    """

    FIGIEL_JOHNSON = "fj"
    PAPER_LITERAL = "paper"

    @classmethod
    def parse(cls, text: str) -> "AdmissibilityRule":
        key = text.strip().lower()
        for rule in cls:
            if key == rule.value or key == rule.name.lower():
                return rule
        raise ValueError(f"unknown admissibility rule {text!r} (use 'fj' or 'paper')")
