import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meancalc.sampling import (
    SHIPPED_SEEDS,
    Interval,
    SamplePlan,
    convenience_sample,
    derive_seed,
    random_sample,
    uniform_sample,
)


class TestInterval:
    def test_requires_a_less_than_b(self):
        with pytest.raises(ValueError):
            Interval(1.0, 1.0)
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)

    def test_requires_finite_endpoints(self):
        with pytest.raises(ValueError):
            Interval(0.0, math.inf)

    def test_width_and_membership(self):
        iv = Interval(2.0, 4.0)
        assert iv.width == 2.0
        assert 2.0 in iv and 4.0 in iv and 3.0 in iv
        assert 4.5 not in iv


class TestUniform:
    def test_hundredths_grid(self):
        xs = uniform_sample(Interval(0.0, 1.0), 100)
        assert len(xs) == 100
        np.testing.assert_allclose(xs, [i / 100 for i in range(1, 101)], rtol=0, atol=1e-15)
        assert xs[-1] == 1.0

    def test_single_point_is_right_endpoint(self):
        assert uniform_sample(Interval(0.0, 1.0), 1).tolist() == [1.0]

    def test_hand_computed_grid(self):
        # h = (4-2)/4 = 0.5, points a + i*h
        assert uniform_sample(Interval(2.0, 4.0), 4).tolist() == [2.5, 3.0, 3.5, 4.0]

    def test_last_point_clamped_to_b(self):
        xs = uniform_sample(Interval(0.0, 0.1), 3)
        assert xs[-1] == 0.1

    @given(
        a=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
        width=st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
        n=st.integers(min_value=1, max_value=2000),
    )
    @settings(max_examples=60)
    def test_even_spacing(self, a, width, n):
        iv = Interval(a, a + width)
        xs = uniform_sample(iv, n)
        assert len(xs) == n
        assert xs[-1] == iv.b
        assert np.all(np.diff(xs) > 0)
        h = iv.width / n
        if n > 1:
            # point rounding floors the achievable spacing error at a few
            # ulps of the endpoint magnitude
            tolerance = max(1e-12 * iv.width, 4 * math.ulp(max(abs(iv.a), abs(iv.b))))
            assert np.max(np.abs(np.diff(xs) - h)) <= tolerance

    @pytest.mark.parametrize("a,b,n", [
        (0.0, 1.0, 100), (0.0, math.pi, 997), (0.5, 2.0, 64), (1951.0, 2010.0, 60),
    ])
    def test_even_spacing_on_working_intervals(self, a, b, n):
        iv = Interval(a, b)
        xs = uniform_sample(iv, n)
        h = iv.width / n
        assert np.max(np.abs(np.diff(xs) - h)) <= 1e-12 * iv.width

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            uniform_sample(Interval(0.0, 1.0), 0)
        with pytest.raises(TypeError):
            uniform_sample(Interval(0.0, 1.0), 2.5)


class TestRandom:
    def test_draws_are_strictly_interior(self):
        iv = Interval(0.0, 2.0)
        for seed in SHIPPED_SEEDS:
            xs = random_sample(iv, 10, seed)
            assert len(xs) == 10
            assert np.all((xs > 0.0) & (xs < 2.0))

    def test_same_seed_reproduces_bits(self):
        iv = Interval(-1.0, 3.0)
        a = random_sample(iv, 1000, seed=42)
        b = random_sample(iv, 1000, seed=42)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        iv = Interval(0.0, 1.0)
        assert not np.array_equal(random_sample(iv, 100, 1), random_sample(iv, 100, 2))

    def test_zero_count_rejected(self):
        with pytest.raises(ValueError):
            random_sample(Interval(0.0, 1.0), 0, 1)

    def test_seed_range_checked(self):
        with pytest.raises(ValueError):
            random_sample(Interval(0.0, 1.0), 5, -1)
        with pytest.raises(ValueError):
            random_sample(Interval(0.0, 1.0), 5, 2**64)

    @pytest.mark.parametrize("seed", SHIPPED_SEEDS)
    def test_moments_on_unit_interval(self, seed):
        xs = random_sample(Interval(0.0, 1.0), 100_000, seed)
        assert abs(xs.mean() - 0.5) < 0.01
        assert abs(xs.var(ddof=1) - 1.0 / 12.0) < 0.01


class TestConvenience:
    def test_sorts_points(self):
        out = convenience_sample(Interval(0.0, 10.0), [1.0, 9.0, 3.0])
        assert out.tolist() == [1.0, 3.0, 9.0]

    def test_rejects_first_out_of_interval_point(self):
        with pytest.raises(ValueError, match="1.2"):
            convenience_sample(Interval(0.0, 1.0), [0.5, 1.2])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            convenience_sample(Interval(0.0, 1.0), [])

    def test_retains_duplicates(self):
        out = convenience_sample(Interval(0.0, 10.0), [5.0, 2.0, 2.0])
        assert out.tolist() == [2.0, 2.0, 5.0]

    def test_station_years_accepted(self, sat_table):
        out = convenience_sample(Interval(1951.0, 2010.0), list(sat_table.xs))
        assert len(out) == 60

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
                    min_size=1, max_size=30))
    def test_output_non_decreasing_and_permutation_invariant(self, points):
        iv = Interval(0.0, 1.0)
        out = convenience_sample(iv, points)
        assert np.all(np.diff(out) >= 0)
        assert np.array_equal(out, convenience_sample(iv, sorted(points, reverse=True)))


class TestSamplePlan:
    def test_factories_dispatch(self):
        iv = Interval(0.0, 1.0)
        assert SamplePlan.uniform(iv, 4).sample().tolist() == [0.25, 0.5, 0.75, 1.0]
        assert len(SamplePlan.random(iv, 7, seed=3).sample()) == 7
        assert SamplePlan.convenience(iv, [0.9, 0.1]).sample().tolist() == [0.1, 0.9]

    def test_convenience_n_matches_points(self):
        plan = SamplePlan.convenience(Interval(0.0, 1.0), [0.5, 0.25])
        assert plan.n == 2

    def test_random_plan_reproducible(self):
        plan = SamplePlan.random(Interval(0.0, 1.0), 50, seed=9)
        assert np.array_equal(plan.sample(), plan.sample())

    def test_for_interval_reinstantiates(self):
        plan = SamplePlan.uniform(Interval(0.0, 1.0), 10)
        moved = plan.for_interval(Interval(0.0, 0.5))
        assert moved.n == 10
        assert moved.interval.b == 0.5

    def test_convenience_cannot_be_reinstantiated(self):
        plan = SamplePlan.convenience(Interval(0.0, 1.0), [0.5])
        with pytest.raises(ValueError):
            plan.for_interval(Interval(0.0, 2.0))

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError):
            SamplePlan(Interval(0.0, 1.0), "stratified", 10)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, (1, 2)) == derive_seed(7, (1, 2))

    def test_distinct_keys_give_distinct_seeds(self):
        seeds = {derive_seed(7, (t, i)) for t in range(4) for i in range(6)}
        assert len(seeds) == 24

    def test_in_seed_range(self):
        s = derive_seed(123, (0,))
        assert 0 <= s < 2**64
