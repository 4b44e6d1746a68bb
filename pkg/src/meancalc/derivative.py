"""Derivatives as limits of secant slopes, and derivative-antiderivative checks.

The secant slope ``(s(t2) - s(t1)) / (t2 - t1)`` is the average rate of
change over ``[t1, t2]`` (for a position function, the average speed); here
it is called the graphic mean.  The derivative at ``t1`` is estimated by
shrinking the forward step geometrically and stopping once two successive
slopes agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import EvalError
from .functions import label_of
from .mean_integral import function_value, integral
from .sampling import Interval, SamplePlan, derive_seed

__all__ = [
    "SecantStep",
    "DerivativeEstimate",
    "DAPairReport",
    "graphic_mean",
    "derivative_at",
    "verify_da_pair",
]

# Steps below this fraction of max(1, |t1|) are dominated by cancellation
# noise; the schedule stops there and reports non-convergence instead.
H_FLOOR_SCALE = 2.0 ** -30


def graphic_mean(s, t1: float, t2: float) -> float:
    """Secant slope of ``s`` between ``t1`` and ``t2``; symmetric in its endpoints."""
    t1, t2 = float(t1), float(t2)
    if t1 == t2:
        raise ValueError(f"graphic mean requires two distinct points, got t1 = t2 = {t1!r}")
    return (function_value(s, t2) - function_value(s, t1)) / (t2 - t1)


@dataclass(frozen=True)
class SecantStep:
    h: float
    slope: float


@dataclass(frozen=True)
class DerivativeEstimate:
    """Result of the shrinking-secant schedule at a point.

    ``converged`` means the last two slopes differed by at most the
    tolerance; otherwise the schedule ran out (max_iter or the step floor)
    and ``value`` is the last slope computed.
    """

    point: float
    value: float
    steps: tuple[SecantStep, ...]
    converged: bool
    achieved_delta: float

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "value": self.value,
            "converged": self.converged,
            "achieved_delta": self.achieved_delta,
            "steps": [{"h": st.h, "slope": st.slope} for st in self.steps],
        }


def derivative_at(s, t1: float, h0: float = 0.1, ratio: float = 0.5,
                  tol: float = 1e-8, max_iter: int = 40,
                  symmetric: bool = False) -> DerivativeEstimate:
    """Estimate ``s'(t1)`` from graphic means over shrinking steps.

    Step ``k`` uses ``h_k = h0 * ratio**k`` with the forward secant over
    ``[t1, t1 + h_k]`` (or the centered secant over ``[t1 - h_k, t1 + h_k]``
    when ``symmetric=True``, which is more accurate but not the default
    construction).  Iteration stops when two successive slopes differ by at
    most ``tol``, when ``max_iter`` steps have run, or when ``h_k`` falls
    below ``2**-30 * max(1, |t1|)``; non-convergence is flagged, not raised.
    """
    t1 = float(t1)
    if not (h0 > 0.0 and math.isfinite(h0)):
        raise ValueError(f"h0 must be positive and finite, got {h0!r}")
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    h_floor = H_FLOOR_SCALE * max(1.0, abs(t1))
    steps: list[SecantStep] = []
    converged = False
    delta = math.inf
    prev: float | None = None
    for k in range(max_iter):
        h = h0 * ratio**k
        if h < h_floor:
            break
        try:
            if symmetric:
                slope = graphic_mean(s, t1 - h, t1 + h)
            else:
                slope = graphic_mean(s, t1, t1 + h)
        except EvalError as err:
            raise EvalError(err.kind, err.x, err.node,
                            f"secant step h={h!r} failed") from err
        steps.append(SecantStep(h=h, slope=slope))
        if prev is not None:
            delta = abs(slope - prev)
            if delta <= tol:
                converged = True
                break
        prev = slope
    if not steps:
        raise ValueError(f"initial step h0={h0!r} is already below the step floor {h_floor!r}")
    return DerivativeEstimate(
        point=t1,
        value=steps[-1].slope,
        steps=tuple(steps),
        converged=converged,
        achieved_delta=delta,
    )


@dataclass(frozen=True)
class DAPairReport:
    """Two-direction check that ``(f, F)`` is a derivative-antiderivative pair.

    Derivative direction: numeric ``F'`` matches ``f`` on a grid.  Integral
    direction: the sampled integral of ``f`` from ``a`` to each grid point
    matches ``F(x) - F(a)``.
    """

    f_label: str
    F_label: str
    interval: Interval
    grid: tuple[float, ...]
    samples_per_node: int
    deriv_errors: tuple[float, ...]
    integral_errors: tuple[float, ...]
    max_deriv_error: float
    max_integral_error: float
    deriv_tol: float
    integral_tol: float
    deriv_ok: bool
    integral_ok: bool

    @property
    def ok(self) -> bool:
        return self.deriv_ok and self.integral_ok

    def to_dict(self) -> dict:
        return {
            "f": self.f_label,
            "F": self.F_label,
            "interval": self.interval.to_dict(),
            "grid": list(self.grid),
            "samples_per_node": self.samples_per_node,
            "derivative_direction": {
                "errors": list(self.deriv_errors),
                "max_error": self.max_deriv_error,
                "tolerance": self.deriv_tol,
                "ok": self.deriv_ok,
            },
            "integral_direction": {
                "errors": list(self.integral_errors),
                "max_error": self.max_integral_error,
                "tolerance": self.integral_tol,
                "ok": self.integral_ok,
            },
            "ok": self.ok,
        }


def verify_da_pair(f, F, interval: Interval, grid_count: int = 25,
                   deriv_tol: float = 1e-4, int_tol: float = 2e-3,
                   int_plan: SamplePlan | None = None) -> DAPairReport:
    """Check both directions of a claimed derivative-antiderivative pair.

    The grid spans the interval; derivative checks use forward secants (so
    ``F`` must be evaluable slightly beyond the right endpoint), and
    integral checks re-instantiate ``int_plan`` (default: uniform with
    100000 points) on ``[a, x]`` for each grid node.
    """
    if grid_count < 2:
        raise ValueError(f"grid_count must be >= 2, got {grid_count}")
    a = interval.a
    if int_plan is None:
        int_plan = SamplePlan.uniform(interval, 100_000)
    grid = np.linspace(interval.a, interval.b, grid_count)

    deriv_errors = []
    for x in grid:
        est = derivative_at(F, float(x))
        deriv_errors.append(abs(est.value - function_value(f, float(x))))

    base_value = function_value(F, a)
    integral_errors = [0.0]  # at x = a both sides are zero by definition
    for j in range(1, grid_count):
        x = float(grid[j])
        node_plan = int_plan.for_interval(Interval(a, x))
        if node_plan.strategy == "random":
            node_plan = node_plan.with_seed(derive_seed(int_plan.seed, (j,)))
        got = integral(f, node_plan).value
        want = function_value(F, x) - base_value
        integral_errors.append(abs(got - want))

    max_deriv = max(deriv_errors)
    max_int = max(integral_errors)
    return DAPairReport(
        f_label=label_of(f),
        F_label=label_of(F),
        interval=interval,
        grid=tuple(float(x) for x in grid),
        samples_per_node=int_plan.n,
        deriv_errors=tuple(deriv_errors),
        integral_errors=tuple(integral_errors),
        max_deriv_error=max_deriv,
        max_integral_error=max_int,
        deriv_tol=deriv_tol,
        integral_tol=int_tol,
        deriv_ok=max_deriv <= deriv_tol,
        integral_ok=max_int <= int_tol,
    )
