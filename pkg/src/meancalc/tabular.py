"""Functions defined by a table of (x, f) data rows.

A tabular function is loaded from two-column CSV, kept sorted by abscissa,
and evaluated between data points by piecewise-linear interpolation, so it
plugs into the mean/integral and secant operations like any other function.
The bundled ``fredericksburg`` data set holds the annual mean surface air
temperature (deg C) at Fredericksburg, Virginia for 1951-2010, from the
U.S. Historical Climatology Network.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from math import isfinite
from pathlib import Path
from typing import TextIO

import numpy as np

from .mean_integral import IntegralResult, MeanEstimate, arithmetic_mean, \
    linear_interpolate, spacing_weighted_mean
from .sampling import Interval

__all__ = [
    "TabularFunction",
    "CsvError",
    "load_csv",
    "load_csv_path",
    "fredericksburg",
    "fredericksburg_path",
    "tabular_mean",
    "interpolate",
    "tabular_integral",
]


class CsvError(ValueError):
    """Malformed tabular input; ``line`` is the 1-based source line."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TabularFunction:
    """Data rows (x_i, f_i) with strictly increasing, finite abscissae."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]
    columns: tuple[str, str] | None = None  # header names, if the source had them
    source: str = "<data>"

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("abscissae and ordinates must have equal length")
        if len(self.xs) == 0:
            raise ValueError("a tabular function needs at least one data row")
        for v in (*self.xs, *self.ys):
            if not isfinite(v):
                raise ValueError(f"tabular values must be finite, found {v!r}")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("abscissae must be strictly increasing")

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def label(self) -> str:
        return self.source

    @property
    def interval(self) -> Interval:
        if len(self.xs) < 2:
            raise ValueError("a single-row table does not span an interval")
        return Interval(self.xs[0], self.xs[-1])

    def __call__(self, x: float) -> float:
        return interpolate(self, x)

    def values_at(self, xs) -> np.ndarray:
        if len(self.xs) < 2:
            raise ValueError("interpolation requires at least two data rows")
        pts = np.asarray(xs, dtype=np.float64)
        lo, hi = self.xs[0], self.xs[-1]
        bad = (pts < lo) | (pts > hi)
        if bad.any():
            x = float(pts[int(np.argmax(bad))])
            raise ValueError(f"x={x!r} is outside the data range [{lo!r}, {hi!r}]")
        return np.interp(pts, np.asarray(self.xs), np.asarray(self.ys))

    def to_csv(self, stream: TextIO) -> None:
        """Write the rows back out; values round-trip exactly (repr form)."""
        if self.columns is not None:
            stream.write(f"{self.columns[0]},{self.columns[1]}\n")
        for x, y in zip(self.xs, self.ys):
            stream.write(f"{x!r},{y!r}\n")

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "columns": list(self.columns) if self.columns else None,
            "x": list(self.xs),
            "f": list(self.ys),
        }


def _parse_cell(text: str) -> float | None:
    try:
        v = float(text)
    except ValueError:
        return None
    return v


def load_csv(stream: TextIO, source: str = "<stream>") -> TabularFunction:
    """Read a two-column numeric CSV, with one optional header row.

    The header is auto-detected (first row with a non-numeric cell).  Rows
    are sorted by abscissa; duplicate abscissae, malformed rows and
    non-finite values are rejected with their line number.
    """
    rows: list[tuple[float, float, int]] = []
    columns: tuple[str, str] | None = None
    for lineno, record in enumerate(csv.reader(stream), start=1):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != 2:
            raise CsvError(f"expected 2 columns, found {len(record)}", lineno)
        x, y = _parse_cell(record[0].strip()), _parse_cell(record[1].strip())
        if x is None or y is None:
            if not rows and columns is None:
                columns = (record[0].strip(), record[1].strip())
                continue
            bad = record[0] if x is None else record[1]
            raise CsvError(f"non-numeric cell {bad.strip()!r}", lineno)
        if not (isfinite(x) and isfinite(y)):
            raise CsvError(f"non-finite value in row {record!r}", lineno)
        rows.append((x, y, lineno))
    if not rows:
        raise CsvError("no data rows found")

    rows.sort(key=lambda r: r[0])
    for (x1, _, _), (x2, _, line2) in zip(rows, rows[1:]):
        if x1 == x2:
            raise CsvError(f"duplicate abscissa {x2!r}", line2)
    return TabularFunction(
        xs=tuple(r[0] for r in rows),
        ys=tuple(r[1] for r in rows),
        columns=columns,
        source=source,
    )


def load_csv_path(path: str | Path) -> TabularFunction:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        return load_csv(fh, source=path.name)


def fredericksburg_path() -> Path:
    """Filesystem path of the bundled Fredericksburg temperature CSV."""
    return Path(str(resources.files("meancalc").joinpath("data/fredericksburg.csv")))


def fredericksburg() -> TabularFunction:
    """The bundled 1951-2010 Fredericksburg annual-mean-temperature table."""
    text = resources.files("meancalc").joinpath("data/fredericksburg.csv").read_text("utf-8")
    return load_csv(io.StringIO(text), source="fredericksburg.csv")


def tabular_mean(tf: TabularFunction, *, spacing_weighted: bool = False) -> MeanEstimate:
    """Arithmetic mean of the ordinates (rows treated as convenience samples)."""
    if spacing_weighted and len(tf) > 1:
        return spacing_weighted_mean(np.asarray(tf.xs), np.asarray(tf.ys))
    return arithmetic_mean(tf.ys)


def interpolate(tf: TabularFunction, x: float) -> float:
    """Piecewise-linear value at ``x``; exact at nodes, no extrapolation."""
    if len(tf) < 2:
        raise ValueError("interpolation requires at least two data rows")
    return linear_interpolate(np.asarray(tf.xs), np.asarray(tf.ys), x)


def tabular_integral(tf: TabularFunction, *, spacing_weighted: bool = False) -> IntegralResult:
    """Integral over the data span: (max x - min x) times the tabular mean."""
    iv = tf.interval
    m = tabular_mean(tf, spacing_weighted=spacing_weighted)
    return IntegralResult(
        value=iv.width * m.mean,
        mean=m,
        interval=iv,
        error_bar=iv.width * m.stderr,
    )
