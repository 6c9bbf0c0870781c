"""Exhaustive enumeration oracle for iterate and limit norms.

Test-only reference: enumerates every admissible family of successive
finite sets through their traces on the support (unions with holes and
partial covers included), with none of the engine's interval reductions.
Memoisation lives inside a single top-level call and is never shared.
"""

from __future__ import annotations

from fractions import Fraction

from .rules import AdmissibilityRule
from .vectors import FiniteVector

__all__ = ["brute_force_norm", "ORACLE_SUPPORT_LIMIT"]

ORACLE_SUPPORT_LIMIT = 8


def brute_force_norm(x: FiniteVector, k: int | None, rule: AdmissibilityRule) -> Fraction:
    """Exact norm by exhaustive family enumeration; ``k=None`` is the limit."""
    if x.support_size > ORACLE_SUPPORT_LIMIT:
        raise ValueError(
            f"oracle refuses support size {x.support_size} > {ORACLE_SUPPORT_LIMIT}"
        )
    points = tuple(x.entries())
    if not points:
        return Fraction(0)
    memo: dict = {}
    if k is None:
        if rule is AdmissibilityRule.PAPER_LITERAL:
            # Constant once the step index passes the largest support index.
            top = points[-1][0] + 1
            return _level(points, top, rule, memo)
        return _limit_fj(points, memo)
    return _level(points, k, rule, memo)


def _sup(points) -> Fraction:
    return max(abs(v) for _, v in points)


def _subsets(points):
    n = len(points)
    for mask in range(1, 1 << n):
        yield tuple(points[i] for i in range(n) if mask >> i & 1)


def _chunkings(subset):
    """All splits of a sorted tuple into consecutive nonempty chunks."""
    n = len(subset)
    for cuts in range(1 << (n - 1)):
        chunks = []
        start = 0
        for i in range(n - 1):
            if cuts >> i & 1:
                chunks.append(subset[start:i + 1])
                start = i + 1
        chunks.append(subset[start:])
        yield chunks


def _level(points, k: int, rule: AdmissibilityRule, memo) -> Fraction:
    key = (points, k)
    if key in memo:
        return memo[key]
    if k == 0:
        result = _sup(points)
    else:
        result = _level(points, k - 1, rule, memo)
        for subset in _subsets(points):
            first_index = subset[0][0]
            for chunks in _chunkings(subset):
                n = len(chunks)
                if rule is AdmissibilityRule.FIGIEL_JOHNSON:
                    if n > first_index:
                        continue
                else:
                    # Step k uses exactly k-1 sets; sets missing the support
                    # can always be parked above it, so any j <= k-1 traces
                    # with min >= k-1 are realisable.
                    if n > k - 1 or first_index < k - 1:
                        continue
                total = Fraction(0)
                for chunk in chunks:
                    total += _level(chunk, k - 1, rule, memo)
                result = max(result, total / 2)
    memo[key] = result
    return result


def _limit_fj(points, memo) -> Fraction:
    key = (points, "T")
    if key in memo:
        return memo[key]
    result = _sup(points)
    for subset in _subsets(points):
        first_index = subset[0][0]
        for chunks in _chunkings(subset):
            if len(chunks) > first_index:
                continue
            if len(chunks) == 1 and chunks[0] == points:
                # The one-set full-trace family scores half the value being
                # defined; it can never set the maximum.
                continue
            total = Fraction(0)
            for chunk in chunks:
                total += _limit_fj(chunk, memo)
            result = max(result, total / 2)
    memo[key] = result
    return result
