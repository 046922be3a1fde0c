import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optdesign import (BoundKind, DomainError, lambda1_star, lower_bound_new,
                       lower_bound_old, prunable)
from oracles import lambda1_min_oracle

SQRT3 = math.sqrt(3.0)


class TestLambda1Star:
    def test_zero_excess_is_one(self):
        assert lambda1_star(5, 0.0) == 1.0

    def test_dimension_one_is_identically_one(self):
        assert lambda1_star(1, 7.3) == 1.0
        assert lambda1_star(1, 0.0) == 1.0
        assert lambda1_star(1, 1e9) == 1.0

    def test_m2_eps1(self):
        # closed form 1.5 - sqrt(3)/2
        assert lambda1_star(2, 1.0) == pytest.approx(1.5 - SQRT3 / 2,
                                                     abs=1e-14)

    def test_matches_naive_formula_at_moderate_eps(self):
        for m in (2, 3, 6):
            for eps in (1e-6, 0.3, 2.0, 50.0):
                naive = 1 + eps / 2 - math.sqrt(eps * (4 + eps - 4 / m)) / 2
                assert lambda1_star(m, eps) == pytest.approx(naive,
                                                             rel=1e-12)

    def test_strictly_decreasing_in_eps(self):
        grid = np.logspace(-6, 6, 200)
        for m in (2, 4, 9):
            vals = [lambda1_star(m, e) for e in grid]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_oracle_equivalence(self):
        for m in (2, 3, 4, 5):
            for eps in (0.1, 1.0, 10.0):
                assert lambda1_star(m, eps) == pytest.approx(
                    lambda1_min_oracle(m, eps), abs=1e-6)


class TestLowerBounds:
    def test_new_at_zero_excess(self):
        assert lower_bound_new(3, 0.0) == 3.0

    def test_new_m2_eps1(self):
        assert lower_bound_new(2, 1.0) == pytest.approx(3.0 - SQRT3,
                                                        abs=1e-14)

    def test_new_m3_eps1(self):
        exact = 3.0 * (1.5 - math.sqrt(11.0 / 3.0) / 2.0)
        assert lower_bound_new(3, 1.0) == pytest.approx(exact, abs=1e-12)
        assert lower_bound_new(3, 1.0) == pytest.approx(1.6277187, abs=1e-6)

    def test_new_limit_is_one(self):
        assert abs(lower_bound_new(3, 1e6) - 1.0) < 3e-6
        for m in range(1, 11):
            assert abs(lower_bound_new(m, 1e6) - 1.0) <= 1e-3

    def test_old_at_zero_excess(self):
        assert lower_bound_old(4, 0.0) == 4.0

    def test_old_m3_eps_half_exact(self):
        # sqrt(0.5 * 4.5) = 1.5 exactly
        assert lower_bound_old(3, 0.5) == pytest.approx(1.5, abs=1e-12)

    def test_old_limit_is_zero(self):
        for m in range(1, 11):
            assert lower_bound_old(m, 1e6) <= 1e-3

    def test_dominance_instance(self):
        assert lower_bound_new(3, 0.5) == pytest.approx(1.8625406, abs=1e-6)
        assert lower_bound_new(3, 0.5) > lower_bound_old(3, 0.5)

    def test_new_exceeds_one_for_m_ge_2(self):
        for m in (2, 5, 10):
            for eps in np.logspace(-9, 9, 50):
                assert lower_bound_new(m, eps) > 1.0

    def test_monotone_nonincreasing_on_log_grid(self):
        grid = np.logspace(-9, 9, 400)
        for m in (1, 2, 3, 5, 10):
            new = [lower_bound_new(m, e) for e in grid]
            old = [lower_bound_old(m, e) for e in grid]
            assert all(a >= b for a, b in zip(new, new[1:]))
            assert all(a >= b for a, b in zip(old, old[1:]))

    @settings(max_examples=300, deadline=None)
    @given(m=st.integers(min_value=1, max_value=12),
           eps=st.floats(min_value=1e-9, max_value=1e9))
    def test_dominance_property(self, m, eps):
        assert lower_bound_new(m, eps) > lower_bound_old(m, eps)
        assert lower_bound_new(m, eps) <= m

    def test_equal_to_m_at_zero(self):
        for m in range(1, 13):
            assert lower_bound_new(m, 0.0) == float(m)
            assert lower_bound_old(m, 0.0) == float(m)


class TestArgumentChecks:
    def test_roundoff_negative_eps_clamped(self):
        assert lambda1_star(3, -1e-13) == 1.0
        assert lower_bound_new(3, -1e-13) == 3.0

    def test_negative_eps_beyond_roundoff_raises(self):
        with pytest.raises(DomainError):
            lower_bound_new(3, -1e-6)
        with pytest.raises(DomainError):
            lower_bound_old(3, -1.0)

    @pytest.mark.parametrize("m", [0, -3, 2.5, "x"])
    def test_bad_m_raises(self, m):
        with pytest.raises(DomainError):
            lower_bound_new(m, 1.0)

    def test_numpy_integer_m_accepted(self):
        assert lower_bound_new(np.int64(3), 0.0) == 3.0

    def test_nan_eps_raises(self):
        with pytest.raises(DomainError):
            lower_bound_new(3, float("nan"))


class TestPrunable:
    def test_m1_worked_state(self):
        # h_1 = 1; the point with d = 0.4 is correctly removable
        assert prunable(0.4, 1, 0.6, BoundKind.NEW, tol=0.0)

    def test_support_points_never_prunable(self):
        for eps in (0.0, 0.5, 7.0):
            for kind in (BoundKind.NEW, BoundKind.OLD):
                for m in (1, 2, 5):
                    assert not prunable(float(m), m, eps, kind, tol=0.0)

    def test_old_and_new_windows(self):
        assert prunable(1.4, 3, 0.5, BoundKind.OLD, 0.0)
        assert prunable(1.4, 3, 0.5, BoundKind.NEW, 0.0)
        # the strict-improvement window: between the two thresholds
        assert not prunable(1.6, 3, 0.5, BoundKind.OLD, 0.0)
        assert prunable(1.6, 3, 0.5, BoundKind.NEW, 0.0)

    def test_none_is_constantly_false(self):
        for d in (0.0, 0.5, 3.0):
            assert not prunable(d, 3, 10.0, BoundKind.NONE, 0.0)

    def test_tie_is_kept(self):
        thr = lower_bound_new(3, 0.5)
        assert not prunable(thr, 3, 0.5, BoundKind.NEW, tol=0.0)

    def test_tolerance_shrinks_the_cut(self):
        thr = lower_bound_new(3, 0.5)
        assert prunable(thr - 1e-6, 3, 0.5, BoundKind.NEW, tol=0.0)
        assert not prunable(thr - 1e-6, 3, 0.5, BoundKind.NEW, tol=1e-5)

    def test_from_string(self):
        assert BoundKind.from_string("NEW") is BoundKind.NEW
        with pytest.raises(DomainError):
            BoundKind.from_string("fancy")
