"""Integrals as interval width times the arithmetic mean of sampled values.

The estimator for the mean of ``f`` over ``[a, b]`` from ``n`` sample points
is the plain arithmetic mean of the sampled values; by the law of large
numbers it converges to the true function average as ``n`` grows, with
standard error ``s/sqrt(n)``.  The integral is then ``(b-a)`` times the
mean, an antiderivative is the integral with a moving upper endpoint, and
``F(d) - F(c)`` evaluates an integral from a known antiderivative.

All sums are compensated (``math.fsum``) in a fixed left-to-right order, so
results are bit-reproducible for a given plan.  Note that uniform sampling
places points at right endpoints of subintervals, which carries a known
O(h) bias for monotone integrands (the mean of ``y=x`` over [0,1] from 100
points is 0.505, not 0.5); the bias vanishes as ``n`` grows and is kept
rather than corrected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext
from typing import Sequence

import numpy as np

from .expr import EvalError, Expr, evaluate, evaluate_many
from .sampling import DEFAULT_SEED, Interval, SamplePlan, derive_seed

__all__ = [
    "MeanEstimate",
    "IntegralResult",
    "AntiderivativeGrid",
    "TrialRow",
    "ConvergenceReport",
    "arithmetic_mean",
    "spacing_weighted_mean",
    "function_mean",
    "function_values",
    "function_value",
    "integral",
    "antiderivative_grid",
    "ftc_evaluate",
    "convergence_study",
    "linear_interpolate",
    "display_round",
]


@dataclass(frozen=True)
class MeanEstimate:
    """An estimated mean with its sample spread: ``stderr = sample_stddev/sqrt(n)``."""

    mean: float
    n: int
    sample_stddev: float
    stderr: float

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "n": self.n,
            "sample_stddev": self.sample_stddev,
            "stderr": self.stderr,
        }


@dataclass(frozen=True)
class IntegralResult:
    """``value = (b-a) * mean``; ``error_bar = (b-a) * stderr``."""

    value: float
    mean: MeanEstimate
    interval: Interval
    error_bar: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_bar": self.error_bar,
            "interval": self.interval.to_dict(),
            "mean": self.mean.to_dict(),
        }


def _fsum(values) -> float:
    if isinstance(values, np.ndarray):
        values = values.tolist()
    return math.fsum(values)


def arithmetic_mean(values: Sequence[float]) -> MeanEstimate:
    """Compensated mean and (n-1)-divisor sample standard deviation.

    A constant sample returns its value bit-exactly with zero spread; a
    single value has zero standard deviation by convention.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("arithmetic_mean requires a non-empty 1-d sequence of values")
    finite = np.isfinite(arr)
    if not finite.all():
        bad = float(arr[~finite][0])
        raise ValueError(f"sample values must be finite, found {bad!r}")
    n = int(arr.size)
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        return MeanEstimate(mean=lo, n=n, sample_stddev=0.0, stderr=0.0)
    mean = _fsum(arr) / n
    sd = math.sqrt(_fsum((arr - mean) ** 2) / (n - 1))
    return MeanEstimate(mean=mean, n=n, sample_stddev=sd, stderr=sd / math.sqrt(n))


def spacing_weighted_mean(xs: np.ndarray, vals: np.ndarray) -> MeanEstimate:
    """Mean with weights w_i = (x_{i+1} - x_{i-1})/2, one-sided at the ends.

    Counters the bias of unevenly clustered sample locations.  The weights
    make this the trapezoid average: the integral of the piecewise-linear
    interpolant divided by the span.  ``xs`` must be sorted.
    """
    xs = np.asarray(xs, dtype=np.float64)
    vals = np.asarray(vals, dtype=np.float64)
    n = int(vals.size)
    lo, hi = float(vals.min()), float(vals.max())
    if n == 1 or lo == hi:
        return arithmetic_mean(vals)
    w = np.empty_like(xs)
    w[0] = (xs[1] - xs[0]) / 2.0
    w[-1] = (xs[-1] - xs[-2]) / 2.0
    if n > 2:
        w[1:-1] = (xs[2:] - xs[:-2]) / 2.0
    total = _fsum(w)
    if total == 0.0:
        return arithmetic_mean(vals)
    mean = _fsum(w * vals) / total
    var = _fsum(w * (vals - mean) ** 2) / total * (n / (n - 1))
    sd = math.sqrt(var)
    return MeanEstimate(mean=mean, n=n, sample_stddev=sd, stderr=sd / math.sqrt(n))


def function_values(f, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` at every point of ``xs``.

    ``f`` may be an expression tree, any object exposing ``values_at`` (a
    vectorized evaluator), or a plain ``float -> float`` callable.
    """
    if isinstance(f, Expr):
        return evaluate_many(f, xs)
    values_at = getattr(f, "values_at", None)
    if values_at is not None:
        return np.asarray(values_at(xs), dtype=np.float64)
    if callable(f):
        return np.asarray([f(float(x)) for x in xs], dtype=np.float64)
    raise TypeError(f"not a function: {f!r}")


def function_value(f, x: float) -> float:
    """Evaluate ``f`` at a single point."""
    if isinstance(f, Expr):
        return evaluate(f, x)
    if callable(f):
        return float(f(float(x)))
    raise TypeError(f"not a function: {f!r}")


def function_mean(f, plan: SamplePlan, *, spacing_weighted: bool = False) -> MeanEstimate:
    """Arithmetic mean of ``f`` over the plan's sample points.

    ``spacing_weighted=True`` switches to the spacing-weighted estimator,
    intended for convenience samples with very uneven coverage.
    """
    xs = plan.sample()
    vals = function_values(f, xs)
    if spacing_weighted:
        return spacing_weighted_mean(xs, vals)
    return arithmetic_mean(vals)


def integral(f, plan: SamplePlan, *, spacing_weighted: bool = False) -> IntegralResult:
    """Integral of ``f`` over the plan's interval: width times the sampled mean."""
    m = function_mean(f, plan, spacing_weighted=spacing_weighted)
    width = plan.interval.width
    return IntegralResult(
        value=width * m.mean,
        mean=m,
        interval=plan.interval,
        error_bar=width * m.stderr,
    )


# --------------------------------------------------------------------------
# Antiderivative grids and evaluation via F(d) - F(c)
# --------------------------------------------------------------------------

def linear_interpolate(xp: np.ndarray, fp: np.ndarray, x: float) -> float:
    """Piecewise-linear value at ``x``; exact at the nodes, no extrapolation."""
    x = float(x)
    if not xp[0] <= x <= xp[-1]:
        raise ValueError(f"x={x!r} is outside the covered range [{xp[0]!r}, {xp[-1]!r}]")
    return float(np.interp(x, xp, fp))


@dataclass(frozen=True)
class AntiderivativeGrid:
    """Values of ``F(x) = integral of f from base_point to x`` on a node grid.

    ``F(base_point) = 0``.  Between nodes the grid interpolates linearly, so
    it can itself be used as a function handle.
    """

    base_point: float
    xs: tuple[float, ...]
    values: tuple[float, ...]
    samples_per_node: int
    strategy: str

    def __call__(self, x: float) -> float:
        return linear_interpolate(np.asarray(self.xs), np.asarray(self.values), x)

    def values_at(self, xs) -> np.ndarray:
        pts = np.asarray(xs, dtype=np.float64)
        lo, hi = self.xs[0], self.xs[-1]
        bad = (pts < lo) | (pts > hi)
        if bad.any():
            x = float(pts[int(np.argmax(bad))])
            raise ValueError(f"x={x!r} is outside the covered range [{lo!r}, {hi!r}]")
        return np.interp(pts, np.asarray(self.xs), np.asarray(self.values))

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.values))

    def to_dict(self) -> dict:
        return {
            "base_point": self.base_point,
            "x": list(self.xs),
            "F": list(self.values),
            "samples_per_node": self.samples_per_node,
            "strategy": self.strategy,
        }


def antiderivative_grid(f, a: float, x_max: float, grid_count: int,
                        plan: SamplePlan) -> AntiderivativeGrid:
    """Tabulate ``F(x_j) = integral(f, [a, x_j])`` on a uniform node grid.

    ``plan`` acts as a template: its strategy and sample count are
    re-instantiated on ``[a, x_j]`` for every node (random templates get an
    independent per-node seed derived from the template seed and the node
    index).  The first node is ``a`` with ``F(a) = 0``.
    """
    a, x_max = float(a), float(x_max)
    if not a < x_max:
        raise ValueError(f"grid requires a < x_max, got a={a!r}, x_max={x_max!r}")
    if grid_count < 2:
        raise ValueError(f"grid_count must be >= 2, got {grid_count}")
    nodes = np.linspace(a, x_max, grid_count)
    values = [0.0]
    for j in range(1, grid_count):
        node_plan = plan.for_interval(Interval(a, float(nodes[j])))
        if node_plan.strategy == "random":
            node_plan = node_plan.with_seed(derive_seed(plan.seed, (j,)))
        try:
            values.append(integral(f, node_plan).value)
        except EvalError as err:
            raise EvalError(err.kind, err.x, err.node,
                            f"grid node {j} (x={nodes[j]!r}) failed") from err
    return AntiderivativeGrid(
        base_point=a,
        xs=tuple(float(x) for x in nodes),
        values=tuple(values),
        samples_per_node=plan.n,
        strategy=plan.strategy,
    )


def ftc_evaluate(F, c: float, d: float) -> float:
    """Evaluate an integral from its antiderivative: ``F(d) - F(c)``.

    ``F`` may be an :class:`AntiderivativeGrid` (interpolated between nodes,
    ``c`` and ``d`` must lie within its range), an expression tree, or any
    callable.
    """
    c, d = float(c), float(d)
    if isinstance(F, AntiderivativeGrid):
        return F(d) - F(c)
    if isinstance(F, Expr):
        return evaluate(F, d) - evaluate(F, c)
    if callable(F):
        return float(F(d)) - float(F(c))
    raise TypeError(f"not an antiderivative: {F!r}")


# --------------------------------------------------------------------------
# Convergence study
# --------------------------------------------------------------------------

def display_round(x: float, places: int = 4) -> str:
    """Half-away-from-zero rounding of the shortest round-trip decimal form.

    Rounding the shortest decimal representation (rather than the full
    binary expansion) keeps values that are decimals in exact arithmetic,
    such as 0.33835, on the intuitive side of the tie: '0.3384'.
    """
    with localcontext() as ctx:
        ctx.prec = 60  # room for large magnitudes plus the decimal places
        d = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places),
                                             rounding=ROUND_HALF_UP)
    if d == 0:
        d = abs(d)  # avoid '-0.0000'
    return str(d)


@dataclass(frozen=True)
class TrialRow:
    """One random-sampling trial: a seed and a mean estimate per sample size."""

    trial: int
    seeds: tuple[int, ...]
    estimates: tuple[MeanEstimate, ...]

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "seeds": list(self.seeds),
            "estimates": [e.to_dict() for e in self.estimates],
            "display": [display_round(e.mean) for e in self.estimates],
        }


@dataclass(frozen=True)
class ConvergenceReport:
    """Sampled means per strategy and sample size, with 4-decimal display values."""

    label: str | None
    interval: Interval
    sizes: tuple[int, ...]
    base_seed: int
    uniform: tuple[MeanEstimate, ...] | None
    trials: tuple[TrialRow, ...]
    average: tuple[float, ...] | None
    reference: float | None

    def display_rows(self) -> list[tuple[str, list[str]]]:
        rows: list[tuple[str, list[str]]] = []
        if self.uniform is not None:
            rows.append(("uniform", [display_round(e.mean) for e in self.uniform]))
        for tr in self.trials:
            rows.append((f"trial {tr.trial}", [display_round(e.mean) for e in tr.estimates]))
        if self.average is not None:
            rows.append(("average", [display_round(v) for v in self.average]))
        if self.reference is not None:
            rows.append(("reference", [display_round(self.reference)] * len(self.sizes)))
        return rows

    def full_rows(self) -> list[tuple[str, list[float]]]:
        rows: list[tuple[str, list[float]]] = []
        if self.uniform is not None:
            rows.append(("uniform", [e.mean for e in self.uniform]))
        for tr in self.trials:
            rows.append((f"trial {tr.trial}", [e.mean for e in tr.estimates]))
        if self.average is not None:
            rows.append(("average", list(self.average)))
        if self.reference is not None:
            rows.append(("reference", [self.reference] * len(self.sizes)))
        return rows

    def to_dict(self) -> dict:
        d: dict = {
            "label": self.label,
            "interval": self.interval.to_dict(),
            "sizes": list(self.sizes),
            "base_seed": self.base_seed,
            "reference": self.reference,
        }
        if self.uniform is not None:
            d["uniform"] = {
                "estimates": [e.to_dict() for e in self.uniform],
                "display": [display_round(e.mean) for e in self.uniform],
            }
        if self.trials:
            d["random"] = {
                "trials": [tr.to_dict() for tr in self.trials],
                "average": list(self.average),
                "average_display": [display_round(v) for v in self.average],
            }
        return d


def convergence_study(f, interval: Interval, sizes: Sequence[int],
                      strategies: Sequence[str] = ("uniform", "random"),
                      trials: int = 3, base_seed: int = DEFAULT_SEED,
                      reference: float | None = None,
                      label: str | None = None) -> ConvergenceReport:
    """Tabulate sampled means of ``f`` for increasing sample sizes.

    The uniform row is computed once per size (it is deterministic).  Each
    random trial uses an independent seed derived from ``base_seed`` and the
    (trial, size) indices via :func:`meancalc.sampling.derive_seed`; the
    average row is the per-size mean over trials.
    """
    sizes = tuple(int(n) for n in sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(n < 1 for n in sizes) or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be positive and strictly ascending, got {sizes}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    strategies = tuple(strategies)
    if not strategies:
        raise ValueError("at least one strategy is required")
    for s in strategies:
        if s not in ("uniform", "random"):
            raise ValueError(f"convergence strategy must be uniform or random, got {s!r}")

    uniform_row = None
    if "uniform" in strategies:
        uniform_row = tuple(
            function_mean(f, SamplePlan.uniform(interval, n)) for n in sizes
        )

    trial_rows: tuple[TrialRow, ...] = ()
    average = None
    if "random" in strategies:
        rows = []
        for t in range(trials):
            seeds = tuple(derive_seed(base_seed, (t, i)) for i in range(len(sizes)))
            ests = tuple(
                function_mean(f, SamplePlan.random(interval, n, seed))
                for n, seed in zip(sizes, seeds)
            )
            rows.append(TrialRow(trial=t + 1, seeds=seeds, estimates=ests))
        trial_rows = tuple(rows)
        average = tuple(
            _fsum([tr.estimates[i].mean for tr in trial_rows]) / trials
            for i in range(len(sizes))
        )

    return ConvergenceReport(
        label=label,
        interval=interval,
        sizes=sizes,
        base_seed=base_seed,
        uniform=uniform_row,
        trials=trial_rows,
        average=average,
        reference=reference,
    )
