"""Render report objects as matplotlib figures saved to files.

Import is deferred to keep plain library/CLI use free of matplotlib start-up
cost; the Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .derivative import DAPairReport, DerivativeEstimate  # noqa: E402
from .mean_integral import AntiderivativeGrid, ConvergenceReport  # noqa: E402
from .tabular import TabularFunction  # noqa: E402

__all__ = [
    "save_antiderivative_figure",
    "save_convergence_figure",
    "save_dapair_figure",
    "save_derivative_figure",
    "save_tabular_figure",
]


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_antiderivative_figure(grid: AntiderivativeGrid, path: str | Path,
                               label: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(grid.xs, grid.values, "o-", ms=4)
    ax.set_xlabel("x")
    ax.set_ylabel("F(x)")
    title = f"Antiderivative grid from base point {grid.base_point:g}"
    if label:
        title += f" of {label}"
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def save_convergence_figure(report: ConvergenceReport, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if report.uniform is not None:
        ax.plot(report.sizes, [e.mean for e in report.uniform], "o-", label="uniform")
    for tr in report.trials:
        ax.plot(report.sizes, [e.mean for e in tr.estimates], "s--",
                ms=4, alpha=0.7, label=f"random trial {tr.trial}")
    if report.average is not None:
        ax.plot(report.sizes, report.average, "k.-", label="trial average")
    if report.reference is not None:
        ax.axhline(report.reference, color="gray", lw=1, ls=":", label="reference")
    ax.set_xscale("log")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("sampled mean")
    ax.set_title(f"Convergence of the sampled mean{' of ' + report.label if report.label else ''}")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_dapair_figure(report: DAPairReport, path: str | Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(report.grid, report.deriv_errors, "o-", ms=3)
    ax1.axhline(report.deriv_tol, color="red", lw=1, ls="--", label="tolerance")
    ax1.set_yscale("log")
    ax1.set_ylabel("|numeric F' - f|")
    ax1.set_title(
        f"({report.f_label}, {report.F_label}) on {report.interval}: "
        f"derivative {'PASS' if report.deriv_ok else 'FAIL'}, "
        f"integral {'PASS' if report.integral_ok else 'FAIL'}"
    )
    ax1.grid(True, alpha=0.3)
    ax1.legend(fontsize=8)
    # first node of the integral direction is identically zero; log scale
    # needs positive values
    xs = report.grid[1:]
    errs = report.integral_errors[1:]
    ax2.plot(xs, errs, "s-", ms=3, color="tab:orange")
    ax2.axhline(report.integral_tol, color="red", lw=1, ls="--", label="tolerance")
    ax2.set_yscale("log")
    ax2.set_xlabel("x")
    ax2.set_ylabel("|integral - (F(x)-F(a))|")
    ax2.grid(True, alpha=0.3)
    ax2.legend(fontsize=8)
    return _finish(fig, path)


def save_derivative_figure(est: DerivativeEstimate, path: str | Path,
                           label: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    hs = [st.h for st in est.steps]
    slopes = [st.slope for st in est.steps]
    ax.plot(hs, slopes, "o-", ms=4)
    ax.axhline(est.value, color="gray", lw=1, ls=":",
               label=f"value {est.value:.10g} ({'converged' if est.converged else 'not converged'})")
    ax.set_xscale("log")
    ax.invert_xaxis()
    ax.set_xlabel("secant step h")
    ax.set_ylabel("secant slope")
    title = f"Shrinking secants at t={est.point:g}"
    if label:
        title += f" for {label}"
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_tabular_figure(tf: TabularFunction, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(tf.xs, tf.ys, "o-", ms=4)
    names = tf.columns or ("x", "f")
    ax.set_xlabel(names[0])
    ax.set_ylabel(names[1])
    ax.set_title(tf.source)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)
