import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsirnorm import (
    AdmissibilityRule,
    BudgetExceededError,
    Ell1,
    EvalSession,
    FiniteVector,
    IndexSet,
    Iterate,
    Join,
    Sup,
    TsirelsonLimit,
    brute_force_norm,
    format_normspec,
    iterate_norm,
    l1_norm,
    norm_eval,
    parse_normspec,
    parse_vector,
    restrict,
    stabilization_level,
    sup_norm,
    tsirelson_norm,
)
from tsirnorm import fastpaths
from tsirnorm.engine import SmallEvaluator

from conftest import random_vector

FJ = AdmissibilityRule.FIGIEL_JOHNSON
PL = AdmissibilityRule.PAPER_LITERAL

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)
tiny = st.dictionaries(st.integers(min_value=1, max_value=12), fractions,
                       min_size=1, max_size=5)


def vec(d):
    return FiniteVector.from_entries(d)


class TestIterateExamples:
    def test_basis_vector_all_levels(self):
        t1 = FiniteVector.basis(1)
        for k in range(5):
            assert iterate_norm(t1, k, FJ) == 1
        assert tsirelson_norm(t1, FJ) == 1
        for j in (2, 5, 9):
            assert tsirelson_norm(FiniteVector.basis(j), FJ) == 1

    def test_level_zero_is_sup(self):
        assert iterate_norm(vec({1: 1, 2: 1}), 0, FJ) == 1

    def test_three_point_run(self):
        x = parse_vector("3:1,4:1,5:1")
        assert iterate_norm(x, 1, FJ) == F(3, 2)
        assert tsirelson_norm(x, FJ) == F(3, 2)

    def test_pair_at_two(self):
        assert iterate_norm(vec({2: 1, 3: 1}), 1, FJ) == 1

    def test_zero_vector(self):
        zero = FiniteVector.zero()
        assert tsirelson_norm(zero, FJ) == 0
        assert iterate_norm(zero, 3, FJ) == 0

    def test_paper_literal_lags_behind(self):
        # Steps 1 and 2 admit no productive family; three singletons only
        # become admissible at step 4.
        x = parse_vector("3:1,4:1,5:1")
        assert iterate_norm(x, 1, PL) == 1
        assert iterate_norm(x, 2, PL) == 1
        assert iterate_norm(x, 3, PL) == 1
        assert iterate_norm(x, 4, PL) == F(3, 2)
        assert tsirelson_norm(x, PL) == F(3, 2)


class TestOracle:
    def test_refuses_large_support(self):
        x = vec({i: F(1) for i in range(1, 10)})
        with pytest.raises(ValueError, match="oracle"):
            brute_force_norm(x, 1, FJ)

    def test_oracle_equivalence_small_samples(self, rng):
        for _ in range(40):
            x = random_vector(rng, max_support=5, max_index=12)
            for rule in (FJ, PL):
                for k in (0, 1, 2, 3, None):
                    expected = brute_force_norm(x, k, rule)
                    got = (tsirelson_norm(x, rule) if k is None
                           else iterate_norm(x, k, rule))
                    assert got == expected, (x, rule, k)


class TestFastPathAgreement:
    def test_levels_1_2_3_match_generic(self, rng):
        for _ in range(40):
            x = random_vector(rng, max_support=9, max_index=26)
            pos, w = zip(*((i, abs(v)) for i, v in x.entries()))
            se = SmallEvaluator(list(pos), list(w), FJ)
            runs = [(s, e, abs(v)) for s, e, v in x.runs]
            assert fastpaths.level1_runs(runs) == se.iterate(1)
            assert fastpaths.level2_top_points(list(pos), list(w)) == se.iterate(2)
            assert fastpaths.level3_top_points(list(pos), list(w)) == se.iterate(3)

    def test_schreier_scans_agree_exhaustively(self, rng):
        for _ in range(60):
            m = rng.randint(1, 5)
            runs, posn = [], 1
            for _ in range(m):
                posn += rng.randint(0, 8)
                width = rng.randint(1, 10)
                runs.append((posn, posn + width - 1,
                             F(rng.randint(1, 9), rng.randint(1, 9))))
                posn += width
            order = sorted(range(len(runs)), key=lambda j: (-runs[j][2], runs[j][0]))
            best = F(0)
            for n in range(1, runs[-1][1] + 1):
                g = fastpaths._greedy_value(runs, order, n)
                if g is not None and g > best:
                    best = g
            assert fastpaths.schreier_max_runs(runs) == best
            assert fastpaths.schreier_max_runs_alt(runs) == best


class TestInvariants:
    @given(tiny)
    @settings(max_examples=50, deadline=None)
    def test_monotone_ladder(self, entries):
        x = vec(entries)
        values = [iterate_norm(x, k, FJ) for k in range(4)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] <= l1_norm(x)

    @given(tiny, st.fractions(min_value=-3, max_value=3, max_denominator=4))
    @settings(max_examples=50, deadline=None)
    def test_homogeneity(self, entries, c):
        x = vec(entries)
        for spec in (Ell1(), Sup(), Iterate(2), TsirelsonLimit(), Join(Ell1(), Iterate(1))):
            assert norm_eval(spec, x.scale(c)) == abs(c) * norm_eval(spec, x)

    @given(tiny)
    @settings(max_examples=50, deadline=None)
    def test_sign_invariance(self, entries):
        x = vec(entries)
        flipped = FiniteVector.from_entries({i: -v if i % 2 else v for i, v in x.entries()})
        for spec in (Ell1(), Sup(), Iterate(2), TsirelsonLimit()):
            assert norm_eval(spec, x) == norm_eval(spec, flipped)

    @given(tiny, st.sets(st.integers(min_value=1, max_value=12), max_size=6))
    @settings(max_examples=50, deadline=None)
    def test_suppression(self, entries, idx):
        x = vec(entries)
        y = restrict(x, IndexSet(idx))
        for k in (1, 2):
            assert iterate_norm(y, k, FJ) <= iterate_norm(x, k, FJ)

    @given(tiny)
    @settings(max_examples=40, deadline=None)
    def test_triangle_inequality_on_split(self, entries):
        x = vec(entries)
        if x.is_zero:
            return
        mid = (x.min_index + x.max_index) // 2
        left, right = x.clip(1, mid), x.clip(mid + 1, x.max_index)
        for spec in (Iterate(1), Iterate(2), TsirelsonLimit()):
            assert norm_eval(spec, x) <= norm_eval(spec, left) + norm_eval(spec, right)

    def test_stabilization_reported(self, rng):
        for _ in range(30):
            x = random_vector(rng, max_support=8, max_index=16)
            k, limit = stabilization_level(x, FJ)
            assert k <= x.support_size
            assert iterate_norm(x, k, FJ) == limit == tsirelson_norm(x, FJ)
            if k:
                assert iterate_norm(x, k - 1, FJ) < limit

    def test_determinism_across_runs(self, rng):
        x = random_vector(rng, max_support=8, max_index=20)
        values = {tsirelson_norm(x, FJ) for _ in range(3)}
        assert len(values) == 1


class TestNormSpecs:
    def test_join_examples(self):
        x = vec({1: 1, 2: 1})
        assert norm_eval(Join(Ell1(), Sup()), x) == 2
        spec = Iterate(1)
        assert norm_eval(Join(spec, spec), x) == norm_eval(spec, x)
        assert norm_eval(Ell1(), vec({1: F(1, 2), 3: -2})) == F(5, 2)

    def test_parse_format_roundtrip(self):
        for text in ("l1", "sup", "iterate:3", "tsirelson", "join(l1,join(sup,iterate:2))"):
            spec = parse_normspec(text)
            assert parse_normspec(format_normspec(spec)) == spec
        with pytest.raises(ValueError):
            parse_normspec("lp:3")
        with pytest.raises(ValueError):
            Iterate(-1)

    def test_budget_error_carries_lower_bound(self):
        x = FiniteVector.from_blocks([(10 ** 6, 2 * 10 ** 6 - 1, F(1, 10 ** 6))])
        with pytest.raises(BudgetExceededError) as err:
            iterate_norm(x, 2, FJ)
        assert err.value.lower_bound >= F(1, 2)

    def test_session_stats_populated(self):
        session = EvalSession()
        x = parse_vector("3:1,4:1,5:1,7:1/2")
        tsirelson_norm(x, FJ, session)
        assert session.stats["ranges_evaluated"] > 0


class TestHugeBlockFastPaths:
    def test_level1_on_millions_wide_blocks(self):
        x = FiniteVector.from_blocks([(10 ** 6, 2 * 10 ** 6 - 1, F(1, 10 ** 6))])
        assert iterate_norm(x, 1, FJ) == F(1, 2)
        assert iterate_norm(x, 0, FJ) == F(1, 10 ** 6)

    def test_paper_literal_closed_forms_any_size(self):
        x = FiniteVector.from_blocks([(10 ** 6, 2 * 10 ** 6 - 1, F(1, 10 ** 6))])
        assert iterate_norm(x, 1, PL) == F(1, 10 ** 6)
        assert iterate_norm(x, 2, PL) == F(1, 10 ** 6)
