import random
from fractions import Fraction as F

import pytest

from tsirnorm import Ell1, FiniteVector, Iterate, Join, Sup, TsirelsonLimit
from tsirnorm.geometry import (
    PhiVariant,
    default_matrix_pool,
    distance_lower,
    order_property_matrix,
    phi_of,
    stability_gap,
    stability_sign_exact,
)

from conftest import random_vector


def flat(m):
    return FiniteVector.from_blocks([(1, m, F(1, m))])


class TestDistance:
    def test_same_norm_gives_one(self):
        pool = [FiniteVector.basis(1), flat(3)]
        est = distance_lower(Iterate(2), Iterate(2), pool)
        assert est.value == 1 and est.kind == "lower-bound"

    def test_l1_over_sup_flat_pool(self):
        pool = [flat(m) for m in range(1, 6)]
        assert distance_lower(Ell1(), Sup(), pool).value == 5

    def test_two_sided_floor(self):
        pool = [FiniteVector.basis(1)]
        est = distance_lower(Iterate(1), Iterate(1), pool, sided="two-sided")
        assert est.value >= 1 and est.sided == "two-sided"

    def test_two_sided_symmetrises(self):
        pool = [flat(4)]
        one = distance_lower(Sup(), Ell1(), pool).value      # ratio 1/4
        two = distance_lower(Sup(), Ell1(), pool, sided="two-sided").value
        assert one == F(1, 4) and two == 4

    def test_pool_monotone(self, rng):
        pool = [random_vector(rng, max_support=4, max_index=10) for _ in range(12)]
        small = distance_lower(Iterate(2), Iterate(1), pool[:4]).value
        large = distance_lower(Iterate(2), Iterate(1), pool).value
        assert large >= small

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError):
            distance_lower(Ell1(), Sup(), [])

    def test_join_estimate_bounded_by_max(self, rng):
        specs = [Ell1(), Sup(), Iterate(1), Iterate(2), TsirelsonLimit()]
        pool = [random_vector(rng, max_support=5, max_index=12) for _ in range(20)]
        for _ in range(25):
            m, n, n2 = rng.choice(specs), rng.choice(specs), rng.choice(specs)
            joined = distance_lower(m, Join(n, n2), pool).value
            single = max(distance_lower(m, n, pool).value,
                         distance_lower(m, n2, pool).value)
            assert joined <= single


class TestPhi:
    def test_same_norm_similarity_one(self):
        est = phi_of(Iterate(1), Iterate(1), PhiVariant.SIMILARITY,
                     [FiniteVector.basis(1)])
        assert est.value == 1.0 and est.bound_direction == "upper"

    def test_logistic_at_one_is_zero(self):
        est = phi_of(Iterate(1), Iterate(1), PhiVariant.LOGISTIC,
                     [FiniteVector.basis(1)])
        assert est.value == 0.0 and est.bound_direction == "lower"

    def test_infinity_endpoints(self):
        assert PhiVariant.LOGISTIC.transform(None) == 1.0
        assert PhiVariant.SIMILARITY.transform(None) == 0.0

    def test_range_and_monotonicity(self):
        values = [F(1), F(9, 8), F(2), F(100), None]
        logistic = [PhiVariant.LOGISTIC.transform(v) for v in values]
        sim = [PhiVariant.SIMILARITY.transform(v) for v in values]
        assert all(0 <= v <= 1 for v in logistic + sim)
        assert logistic == sorted(logistic)
        assert sim == sorted(sim, reverse=True)


@pytest.fixture(scope="module")
def matrix():
    return order_property_matrix(3)


class TestMatrix:

    def test_diagonal(self, matrix):
        for k in range(4):
            assert matrix.d_value(k, k) == 1

    def test_upper_triangle_verdicts(self, matrix):
        for num in range(4):
            for den in range(num + 1, 4):
                entry = matrix.entry(num, den)
                assert entry.verdict == "<=1"
                assert entry.estimate.value == 1

    def test_growth_entries(self, matrix):
        assert matrix.d_value(2, 1) >= 1
        assert matrix.d_value(3, 2) >= F(9, 8)
        assert matrix.d_value(3, 1) >= matrix.d_value(2, 1)

    def test_requires_two_levels(self):
        with pytest.raises(ValueError):
            order_property_matrix(1)


class TestStability:
    def test_constant_matrix(self):
        rep = stability_gap([[0.5] * 3 for _ in range(3)])
        assert rep.gap == 0.0

    def test_checkerboard_example(self):
        rep = stability_gap([[0, 1], [0, 0]])
        assert rep.sup_lower == 1.0 and rep.inf_upper == 0.0 and rep.gap == 1.0

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            stability_gap([[1.0, 2.0]])

    def test_exact_sign_matches_float_gap(self):
        matrix = order_property_matrix(3)
        for variant in PhiVariant:
            grid = matrix.phi_matrix_for_stability(variant)
            rep = stability_gap(grid)
            sign = stability_sign_exact(matrix.d_matrix_for_stability(), variant)
            if sign > 0:
                assert rep.gap > 0
            elif sign < 0:
                assert rep.gap < 0
