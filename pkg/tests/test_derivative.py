import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from meancalc import (
    Interval,
    SamplePlan,
    builtin_da_table,
    derivative_at,
    graphic_mean,
    parse,
    power_pair,
    verify_da_pair,
)
from meancalc.expr import EvalError
from meancalc.tabular import TabularFunction


class TestGraphicMean:
    def test_freeway_mile_markers(self):
        # position 6 at t=2, position 98 at t=4 -> average speed 46
        trip = TabularFunction(xs=(2.0, 4.0), ys=(6.0, 98.0), source="freeway")
        assert graphic_mean(trip, 2.0, 4.0) == 46.0

    def test_linear_function_is_exact(self):
        line = parse("3*x + 7")
        for t1, t2 in ((0.0, 1.0), (-2.0, 5.5), (1.25, 1.26)):
            assert graphic_mean(line, t1, t2) == pytest.approx(3.0, rel=1e-12)

    def test_square_hand_value(self):
        assert graphic_mean(parse("x^2"), 1.0, 2.0) == 3.0  # (4-1)/(2-1)

    def test_equal_points_rejected(self):
        with pytest.raises(ValueError):
            graphic_mean(parse("x^2"), 1.0, 1.0)

    @given(
        t1=st.floats(min_value=-50, max_value=50, allow_nan=False),
        t2=st.floats(min_value=-50, max_value=50, allow_nan=False),
    )
    def test_symmetry_is_bit_exact(self, t1, t2):
        if t1 == t2:
            return
        s = parse("x^2 - 3*x")
        assert graphic_mean(s, t1, t2) == graphic_mean(s, t2, t1)

    def test_secant_error_model_for_square(self):
        # slope of x^2 between t and t+h is exactly 2t + h
        for t in (0.5, 1.0, 2.0, 5.0):
            for h in (0.1, 0.05, 0.01):
                got = graphic_mean(parse("x^2"), t, t + h)
                assert got == pytest.approx(2.0 * t + h, rel=1e-12)


class TestDerivativeAt:
    def test_square_at_one(self):
        est = derivative_at(parse("x^2"), 1.0)
        assert est.converged
        assert abs(est.value - 2.0) <= 1e-6

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_half_square_recovers_identity(self, x):
        est = derivative_at(parse("x^2/2"), x)
        assert est.converged
        assert abs(est.value - x) <= 1e-6

    def test_constant_is_zero_from_the_first_step(self):
        est = derivative_at(parse("3"), 7.0)
        assert est.converged
        assert est.value == 0.0
        assert est.steps[0].slope == 0.0

    def test_steps_strictly_shrink(self):
        est = derivative_at(parse("exp(x)"), 0.3)
        hs = [st.h for st in est.steps]
        assert all(b < a for a, b in zip(hs, hs[1:]))

    def test_converged_iff_delta_within_tol(self):
        est = derivative_at(parse("sin(x)"), 0.7, tol=1e-8)
        assert est.converged
        assert est.achieved_delta <= 1e-8

    def test_nonconvergence_is_flagged_not_raised(self):
        # sqrt has unbounded slope at 0: secants blow up instead of settling
        est = derivative_at(parse("sqrt(x)"), 0.0)
        assert not est.converged

    def test_affine_invariance_linear(self):
        # immediate convergence keeps the scaled schedule in lockstep
        for t in (0.5, 1.0, 2.0):
            base = derivative_at(parse("x"), t).value
            scaled = derivative_at(parse("3*x + 2"), t).value
            assert abs(scaled - 3.0 * base) <= 1e-9

    def test_affine_invariance_scaled_identity(self):
        for t in (0.5, 1.0, 2.0):
            base = derivative_at(parse("x"), t).value
            scaled = derivative_at(parse("-2*x"), t).value
            assert abs(scaled - (-2.0) * base) <= 1e-9

    def test_affine_scaling_tracks_at_tolerance_scale(self):
        # the successive-slope stop rule is not scale-invariant, so curved
        # functions track only to a few multiples of tol
        tol = 1e-8
        for t in (0.5, 1.0):
            base = derivative_at(parse("x^2"), t, tol=tol).value
            scaled = derivative_at(parse("3*x^2 - 2"), t, tol=tol).value
            assert abs(scaled - 3.0 * base) <= 40.0 * tol
            shifted = derivative_at(parse("x^2 + 5"), t, tol=tol).value
            assert abs(shifted - base) <= 40.0 * tol

    def test_symmetric_mode_is_more_accurate_here(self):
        fwd = derivative_at(parse("exp(x)"), 1.0)
        sym = derivative_at(parse("exp(x)"), 1.0, symmetric=True)
        truth = math.e
        assert abs(sym.value - truth) <= abs(fwd.value - truth)

    def test_evaluation_error_reports_step(self):
        with pytest.raises(EvalError, match="secant step"):
            derivative_at(parse("sqrt(1 - x)"), 0.95)  # t2 = 1.05 leaves the domain

    def test_parameter_validation(self):
        f = parse("x")
        with pytest.raises(ValueError):
            derivative_at(f, 0.0, h0=-1.0)
        with pytest.raises(ValueError):
            derivative_at(f, 0.0, ratio=1.5)
        with pytest.raises(ValueError):
            derivative_at(f, 0.0, tol=0.0)
        with pytest.raises(ValueError):
            derivative_at(f, 0.0, max_iter=0)

    def test_trace_is_recorded(self):
        est = derivative_at(parse("x^2"), 1.0)
        assert est.point == 1.0
        assert est.steps[0].h == 0.1
        assert est.steps[0].slope == pytest.approx(2.1, rel=1e-12)
        assert est.value == est.steps[-1].slope


class TestVerifyDAPair:
    def test_sine_pair_on_wide_interval(self):
        report = verify_da_pair(parse("cos(x)"), parse("sin(x)"), Interval(0.0, 3.0),
                                grid_count=25,
                                int_plan=SamplePlan.uniform(Interval(0.0, 3.0), 100_000))
        assert report.deriv_ok and report.integral_ok and report.ok

    def test_square_cube_pair(self):
        report = verify_da_pair(parse("x^2"), parse("x^3/3"), Interval(0.0, 1.0),
                                int_plan=SamplePlan.uniform(Interval(0.0, 1.0), 100_000))
        assert report.ok

    def test_wrong_pair_fails_derivative_direction(self):
        report = verify_da_pair(parse("x"), parse("x^2"), Interval(0.0, 1.0),
                                deriv_tol=1e-3,
                                int_plan=SamplePlan.uniform(Interval(0.0, 1.0), 10_000))
        assert not report.deriv_ok
        # (x^2)' = 2x misses f = x by up to 1 at x = 1
        assert report.max_deriv_error == pytest.approx(1.0, abs=1e-3)
        assert not report.ok

    def test_all_builtin_pairs_pass(self):
        for pair in builtin_da_table():
            plan = SamplePlan.uniform(pair.interval, 100_000)
            report = verify_da_pair(pair.derivative, pair.antiderivative, pair.interval,
                                    grid_count=25, deriv_tol=1e-4, int_tol=2e-3,
                                    int_plan=plan)
            assert report.ok, f"{pair.name}: {report.to_dict()}"

    @pytest.mark.parametrize("n", [1, 2])
    def test_low_power_instances_pass(self, n):
        pair = power_pair(n)
        report = verify_da_pair(pair.derivative, pair.antiderivative, pair.interval,
                                int_plan=SamplePlan.uniform(pair.interval, 100_000))
        assert report.ok

    def test_verdicts_match_maxima(self):
        report = verify_da_pair(parse("x"), parse("x^2"), Interval(0.0, 1.0),
                                int_plan=SamplePlan.uniform(Interval(0.0, 1.0), 2000))
        assert report.deriv_ok == (report.max_deriv_error <= report.deriv_tol)
        assert report.integral_ok == (report.max_integral_error <= report.integral_tol)
        assert report.max_deriv_error == max(report.deriv_errors)
        assert report.max_integral_error == max(report.integral_errors)

    def test_random_plan_supported(self):
        iv = Interval(0.0, 1.0)
        report = verify_da_pair(parse("x^2"), parse("x^3/3"), iv,
                                grid_count=10, int_tol=5e-3,
                                int_plan=SamplePlan.random(iv, 50_000, seed=4))
        assert report.integral_ok

    def test_report_serializes(self):
        iv = Interval(0.0, 1.0)
        report = verify_da_pair(parse("x^2"), parse("x^3/3"), iv, grid_count=5,
                                int_plan=SamplePlan.uniform(iv, 1000))
        d = report.to_dict()
        assert d["derivative_direction"]["ok"] is True
        assert len(d["grid"]) == 5
