"""Specialised exact evaluation paths.

Two families of shortcuts:

* run-compressed closed forms for the sup norm, the l1 norm, and the first
  iterate on block-constant vectors (supports may span millions of indices;
  work is polynomial in the number of runs);
* integer-encoded dynamic programs for the second and third iterates on
  explicit point supports up to a few thousand points (all values are
  numerators over one common denominator, so numpy's int64 max/plus kernels
  apply whenever a size bound certifies no overflow).

Both Schreier maximisers are exact: the objective is piecewise linear in
their scan parameter, and every breakpoint lands in the enumerated
candidate set.  The two use different parametrisations so they can serve
as independent cross-checks of each other.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .rules import AdmissibilityRule
from .session import BudgetExceededError, EvalSession

__all__ = [
    "schreier_max_runs",
    "schreier_max_runs_alt",
    "level1_runs",
    "level2_top_points",
    "level3_top_points",
    "LEVEL2_POINT_LIMIT",
    "LEVEL3_POINT_LIMIT",
]

LEVEL2_POINT_LIMIT = 2600
LEVEL3_POINT_LIMIT = 240

_MININT = -(1 << 62)


# ---------------------------------------------------------------------------
# Schreier maximisation over runs
# ---------------------------------------------------------------------------

def _caps_at(runs, n: int) -> list[int]:
    """Remaining width of each run once indices below n are cut away."""
    caps = []
    for s, e, _ in runs:
        caps.append(max(0, e - max(s, n) + 1))
    return caps


def _greedy_value(runs, order, n: int) -> Fraction | None:
    """Sum of the n largest coefficients among indices >= n, if n fit."""
    caps = _caps_at(runs, n)
    if sum(caps) < n:
        return None
    budget = n
    total = Fraction(0)
    for j in order:
        take = min(caps[j], budget)
        if take:
            total += runs[j][2] * take
            budget -= take
            if budget == 0:
                break
    return total


def schreier_max_runs(runs) -> Fraction:
    """Best Schreier-admissible sum: max over sets P with |P| <= min P.

    Scan parameter: the cardinality n.  For fixed n the optimum takes the n
    largest coefficients among indices >= n; between candidate n values that
    greedy composition varies linearly.
    """
    if not runs:
        return Fraction(0)
    m = len(runs)
    maxpos = runs[-1][1]
    order = sorted(range(m), key=lambda j: (-runs[j][2], runs[j][0]))

    candidates: set[int] = {1, maxpos}
    for s, e, _ in runs:
        candidates.update((s - 1, s, s + 1, e - 1, e, e + 1))

    # Regions of n on which every cap is linear: the gap below the first run,
    # inside run q, or in the gap after run q.  For each region and each
    # prefix of the value order, solve the budget equation n = sum of caps.
    regions = []
    if runs[0][0] > 1:
        regions.append(("gap", -1, 1, runs[0][0] - 1))
    for q in range(m):
        regions.append(("run", q, runs[q][0], runs[q][1]))
        gap_lo = runs[q][1] + 1
        gap_hi = runs[q + 1][0] - 1 if q + 1 < m else maxpos
        if gap_lo <= gap_hi:
            regions.append(("gap", q, gap_lo, gap_hi))
    for kind, q, lo, hi in regions:
        const_sum = 0
        uses_clipped = False
        for count, j in enumerate(order, start=1):
            s_j, e_j, _ = runs[j]
            if kind == "run" and j == q:
                uses_clipped = True
            elif j > q:
                const_sum += e_j - s_j + 1
            # runs before the region contribute no capacity
            if uses_clipped:
                # n = const_sum + (e_q - n + 1)  =>  2n = const_sum + e_q + 1
                num = const_sum + runs[q][1] + 1
                for cand in (num // 2, num // 2 + 1, (num + 1) // 2):
                    if lo <= cand <= hi:
                        candidates.add(cand)
            else:
                for cand in (const_sum - 1, const_sum, const_sum + 1):
                    if lo <= cand <= hi:
                        candidates.add(cand)

    best = Fraction(0)
    for n in candidates:
        if 1 <= n <= maxpos:
            value = _greedy_value(runs, order, n)
            if value is not None and value > best:
                best = value
    return best


def schreier_max_runs_alt(runs) -> Fraction:
    """Independent Schreier maximiser, scanned by (first run, units taken).

    For first run j0 taking c units (pushed to the run's right end), the
    count budget for later runs is e_j0 + 1 - 2c; later runs fill greedily
    by coefficient.  The objective is concave piecewise linear in c.
    """
    if not runs:
        return Fraction(0)
    m = len(runs)
    best = Fraction(0)
    for j0 in range(m):
        s0, e0, w0 = runs[j0]
        tail = sorted(range(j0 + 1, m), key=lambda j: (-runs[j][2], runs[j][0]))
        # Concave fill curve for the tail: breakpoints at cumulative widths.
        cum_width = [0]
        cum_value = [Fraction(0)]
        for j in tail:
            s_j, e_j, w_j = runs[j]
            width = e_j - s_j + 1
            cum_width.append(cum_width[-1] + width)
            cum_value.append(cum_value[-1] + w_j * width)

        def tail_fill(budget: int) -> Fraction:
            if budget <= 0:
                return Fraction(0)
            total = Fraction(0)
            remaining = budget
            for idx, j in enumerate(tail):
                width = cum_width[idx + 1] - cum_width[idx]
                take = min(width, remaining)
                total += runs[j][2] * take
                remaining -= take
                if remaining == 0:
                    break
            return total

        len0 = e0 - s0 + 1
        cs: set[int] = {1, len0}
        for width in cum_width:
            # budget e0 + 1 - 2c = width  =>  c = (e0 + 1 - width) / 2
            num = e0 + 1 - width
            for cand in (num // 2, num // 2 + 1):
                if 1 <= cand <= len0:
                    cs.add(cand)
        for cand in ((e0 + 1) // 2, (e0 + 1) // 2 + 1):
            if 1 <= cand <= len0:
                cs.add(cand)
        for c in cs:
            if c > e0 + 1 - c:  # even the first-run picks no longer fit
                continue
            budget = e0 + 1 - 2 * c
            value = w0 * c + tail_fill(budget)
            if value > best:
                best = value
    return best


def level1_runs(runs) -> Fraction:
    """First iterate of a run vector: sup against half the Schreier optimum."""
    if not runs:
        return Fraction(0)
    sup = max(w for _, _, w in runs)
    return max(sup, schreier_max_runs(runs) / 2)


# ---------------------------------------------------------------------------
# Integer-encoded point tables
# ---------------------------------------------------------------------------

def _encode(weights: list[Fraction]) -> tuple[list[int], int]:
    q = 1
    for w in weights:
        q = lcm(q, w.denominator)
    return [int(w * q) for w in weights], q


def _int64_safe(wq: list[int]) -> bool:
    return 16 * sum(wq) < (1 << 62)


def _sup_table(wq: np.ndarray, s: int) -> np.ndarray:
    sup = np.full((s, s), _MININT, dtype=np.int64)
    for u in range(s):
        sup[u, u:] = np.maximum.accumulate(wq[u:])
    return sup


def _g_table(pos: list[int], wq: list[int], s: int, session: EvalSession) -> np.ndarray:
    """G[t, c] = sum of the min(pos[t], c-t+1) largest weights among points t..c."""
    session.charge(s * (s + 1) // 2, "tables_built")
    values = sorted(set(wq))
    class_of = {v: i for i, v in enumerate(values)}
    ncls = len(values)
    g = np.full((s, s), _MININT, dtype=np.int64)
    for t in range(s):
        cap = pos[t]
        if cap >= s - t:
            # Never clipped: plain running sums.
            acc = 0
            for c in range(t, s):
                acc += wq[c]
                g[t, c] = acc
            continue
        acc = 0
        window_counts = [0] * ncls
        # Fill phase: window no larger than the cap.
        for c in range(t, t + cap):
            acc += wq[c]
            window_counts[class_of[wq[c]]] += 1
            g[t, c] = acc
        # Maintenance phase: keep the top-cap multiset as the window grows.
        counts = window_counts
        ptr = 0
        while ptr < ncls and counts[ptr] == 0:
            ptr += 1
        gsum = acc
        for c in range(t + cap, s):
            v = wq[c]
            ci = class_of[v]
            if ci > ptr:
                gsum += v - values[ptr]
                counts[ci] += 1
                counts[ptr] -= 1
                while counts[ptr] == 0:
                    ptr += 1
            g[t, c] = gsum
    return g


def _level1_table(pos, wq_arr, s, session) -> np.ndarray:
    """L1[u, c]: first-iterate value of points u..c, numerator over 2Q."""
    g = _g_table(pos, [int(v) for v in wq_arr], s, session)
    sch = np.maximum.accumulate(g[::-1, :], axis=0)[::-1, :]
    sup = _sup_table(wq_arr, s)
    l1 = np.maximum(2 * sup, sch)
    l1[np.tril_indices(s, -1)] = _MININT
    return l1


def _suffix_partition_dp(table: np.ndarray, s: int, m_caps: list[int],
                         session: EvalSession) -> int:
    """max over t of the best cover of points t..s-1 by M(t) groups.

    ``table[u, c]`` is the group value for points u..c; returns the best
    family numerator (same denominator as the table), or MININT if no start
    admits two or more groups.
    """
    by_r: dict[int, list[int]] = {}
    for t, cap in enumerate(m_caps):
        if cap >= 2:
            by_r.setdefault(cap, []).append(t)
    if not by_r:
        return _MININT
    rmax = max(by_r)
    best = _MININT
    prev = table[:, s - 1].copy()
    for r in range(2, rmax + 1):
        cur = np.full(s, _MININT, dtype=np.int64)
        hi = s - r  # last allowed end of the first group
        if hi < 0:
            break
        session.charge((hi + 1) * (hi + 2) // 2, "dp_transitions")
        for u in range(hi + 1):
            cur[u] = np.max(table[u, u:hi + 1] + prev[u + 1:hi + 2])
        for t in by_r.get(r, ()):
            if cur[t] > best:
                best = int(cur[t])
        prev = cur
    return best


def _end_partition_dp(table: np.ndarray, b: int, pos, session: EvalSession) -> np.ndarray:
    """Family numerators for all starts, families covering t..b.

    Returns fam[t] = best cover of points t..b by min(pos[t], b-t+1) groups
    (MININT where fewer than two groups are admissible).
    """
    m_caps = [min(pos[t], b - t + 1) for t in range(b + 1)]
    fam = np.full(b + 1, _MININT, dtype=np.int64)
    rmax = 0
    for cap in m_caps:
        rmax = max(rmax, cap)
    if rmax < 2:
        return fam
    prev = table[:b + 1, b].copy()
    for r in range(2, rmax + 1):
        hi = b - r + 1
        if hi < 0:
            break
        cur = np.full(b + 1, _MININT, dtype=np.int64)
        session.charge((hi + 1) * (hi + 2) // 2, "dp_transitions")
        for u in range(hi + 1):
            cur[u] = np.max(table[u, u:hi + 1] + prev[u + 1:hi + 2])
        for t in range(hi + 1):
            if m_caps[t] == r and cur[t] > fam[t]:
                fam[t] = cur[t]
        prev = cur
    return fam


def _require_int64(wq: list[int]) -> None:
    if not _int64_safe(wq):
        raise BudgetExceededError(
            "integer encoding exceeds the int64 safety bound for the fast path"
        )


def level2_top_points(pos: list[int], weights: list[Fraction],
                      session: EvalSession | None = None) -> Fraction:
    """Exact second iterate (Figiel-Johnson) of an explicit point support."""
    s = len(pos)
    if s == 0:
        return Fraction(0)
    if s > LEVEL2_POINT_LIMIT:
        raise BudgetExceededError(f"support {s} exceeds level-2 point limit")
    session = session or EvalSession()
    wq, q = _encode(weights)
    _require_int64(wq)
    wq_arr = np.array(wq, dtype=np.int64)
    l1 = _level1_table(pos, wq_arr, s, session)
    m_caps = [min(pos[t], s - t) for t in range(s)]
    fam = _suffix_partition_dp(l1, s, m_caps, session)
    sup_num = 4 * max(wq)
    return Fraction(int(max(sup_num, fam)), 4 * q)


def _level2_table(pos, wq_arr, s, q, session) -> np.ndarray:
    """L2[u, b]: second-iterate value of points u..b, numerator over 4Q."""
    l1 = _level1_table(pos, wq_arr, s, session)
    sup = _sup_table(wq_arr, s)
    l2 = np.full((s, s), _MININT, dtype=np.int64)
    for b in range(s):
        fam = _end_partition_dp(l1, b, pos, session)
        col = np.maximum.accumulate(fam[::-1])[::-1]
        l2[:b + 1, b] = np.maximum(4 * sup[:b + 1, b], col)
    return l2


def level3_top_points(pos: list[int], weights: list[Fraction],
                      session: EvalSession | None = None) -> Fraction:
    """Exact third iterate (Figiel-Johnson) of an explicit point support."""
    s = len(pos)
    if s == 0:
        return Fraction(0)
    if s > LEVEL3_POINT_LIMIT:
        raise BudgetExceededError(f"support {s} exceeds level-3 point limit")
    session = session or EvalSession()
    wq, q = _encode(weights)
    _require_int64(wq)
    wq_arr = np.array(wq, dtype=np.int64)
    l2 = _level2_table(pos, wq_arr, s, q, session)
    m_caps = [min(pos[t], s - t) for t in range(s)]
    fam = _suffix_partition_dp(l2, s, m_caps, session)
    sup_num = 8 * max(wq)
    return Fraction(int(max(sup_num, fam)), 8 * q)
