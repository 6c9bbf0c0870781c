"""Reference evaluator for iterate and limit norms on small supports.

Works directly on the support points with exact rationals and memoised
recursion over support subintervals.  The search space is reduced to
families of consecutive point groups covering a suffix of the window; the
reduction leans on 1-unconditionality and suppression, which the exhaustive
oracle re-checks independently in the test suite.
"""

from __future__ import annotations

from fractions import Fraction

from .rules import AdmissibilityRule
from .session import EvalSession

__all__ = ["SmallEvaluator", "GENERIC_SUPPORT_LIMIT", "LIMIT_KEY"]

# Past this support size the pure-rational recursion becomes too slow; the
# dispatcher must route to a specialised path or raise a budget error.
GENERIC_SUPPORT_LIMIT = 96

LIMIT_KEY = "T"


class SmallEvaluator:
    """Exact norm values over subranges of one vector's support.

    ``pos`` are the 1-based support indices in ascending order and ``w``
    their absolute coefficients; every iterate norm depends on coefficients
    only through absolute values (sign invariance).
    """

    def __init__(self, pos: list[int], w: list[Fraction], rule: AdmissibilityRule,
                 session: EvalSession | None = None):
        if len(pos) != len(w):
            raise ValueError("positions and weights must have equal length")
        self.pos = pos
        self.w = w
        self.s = len(pos)
        self.rule = rule
        self.session = session or EvalSession()
        # Memo tables live in the session, fingerprinted by the vector so a
        # session shared across related evaluations never mixes values.
        fingerprint = (tuple(pos), tuple(w), rule.value)
        self._value_memo = self.session.memo.setdefault(("values", fingerprint), {})
        self._parts_memo = self.session.memo.setdefault(("parts", fingerprint), {})

    # -- public -----------------------------------------------------------

    def iterate(self, k: int) -> Fraction:
        if self.s == 0:
            return Fraction(0)
        return self._value(0, self.s - 1, k)

    def limit(self) -> Fraction:
        if self.s == 0:
            return Fraction(0)
        if self.rule is AdmissibilityRule.PAPER_LITERAL:
            # Families at step k+1 need min E_1 >= k, impossible once k
            # passes the largest support index: the sequence is constant
            # from that level on.
            return self.iterate(self.pos[-1] + 1)
        return self._value(0, self.s - 1, LIMIT_KEY)

    # -- recursion ----------------------------------------------------------

    def _sup(self, a: int, b: int) -> Fraction:
        return max(self.w[a:b + 1])

    def _value(self, a: int, b: int, key) -> Fraction:
        memo_key = (a, b, key)
        cached = self._value_memo.get(memo_key)
        if cached is not None:
            return cached
        self.session.charge(1, "ranges_evaluated")
        if key == 0:
            result = self._sup(a, b)
        elif key == LIMIT_KEY:
            result = max(self._sup(a, b), self._family_max(a, b, LIMIT_KEY, None))
        else:
            below = self._value(a, b, key - 1)
            result = max(below, self._family_max(a, b, key - 1, key))
        self._value_memo[memo_key] = result
        return result

    def _family_max(self, a: int, b: int, group_key, step_k: int | None) -> Fraction:
        """Half the best admissible-family sum over the window [a..b].

        Families are consecutive point groups covering [t..b] for some start
        t; single-group families never set the maximum and are skipped.
        """
        best = Fraction(0)
        for t in range(a, b + 1):
            count = b - t + 1
            if self.rule is AdmissibilityRule.FIGIEL_JOHNSON or group_key == LIMIT_KEY:
                cap = min(self.pos[t], count)
            else:
                # step k+1 admits exactly k sets; after discarding sets that
                # miss the support, at most k groups with min >= k remain.
                assert step_k is not None
                if self.pos[t] < step_k - 1:
                    continue
                cap = min(step_k - 1, count)
            if cap < 2:
                continue
            self.session.stats["families_enumerated"] += 1
            candidate = self._parts(t, cap, b, group_key)
            if candidate > best:
                best = candidate
        return best / 2

    def _parts(self, u: int, r: int, b: int, group_key) -> Fraction:
        """Best sum of group values over partitions of [u..b] into r groups."""
        if r == 1:
            return self._value(u, b, group_key)
        memo_key = (u, r, b, group_key)
        cached = self._parts_memo.get(memo_key)
        if cached is not None:
            return cached
        best = None
        last_start = b - r + 1
        self.session.charge(last_start - u + 1, "dp_transitions")
        for c in range(u, last_start + 1):
            head = self._value(u, c, group_key)
            tail = self._parts(c + 1, r - 1, b, group_key)
            total = head + tail
            if best is None or total > best:
                best = total
        self._parts_memo[memo_key] = best
        return best
