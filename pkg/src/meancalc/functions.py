"""A uniform handle over the ways a function can be defined.

A handle wraps an expression tree, a tabular data function, or any plain
callable behind one labelled object with both scalar (``handle(x)``) and
vectorized (``handle.values_at(xs)``) evaluation.  The sampling and
derivative operations accept handles, bare expression trees, tabular
functions, and ordinary callables interchangeably.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import Expr, evaluate, evaluate_many, parse, to_source

__all__ = ["FunctionHandle", "from_expression", "wrap", "label_of"]


@dataclass(frozen=True)
class FunctionHandle:
    label: str
    scalar_fn: Callable[[float], float]
    vector_fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __call__(self, x: float) -> float:
        return float(self.scalar_fn(float(x)))

    def values_at(self, xs) -> np.ndarray:
        pts = np.asarray(xs, dtype=np.float64)
        if self.vector_fn is not None:
            return np.asarray(self.vector_fn(pts), dtype=np.float64)
        return np.asarray([self.scalar_fn(float(x)) for x in pts], dtype=np.float64)


def from_expression(source: str | Expr, label: str | None = None) -> FunctionHandle:
    """Handle for a function given as a formula, e.g. ``from_expression("x^2")``."""
    tree = parse(source) if isinstance(source, str) else source
    return FunctionHandle(
        label=label if label is not None else to_source(tree),
        scalar_fn=lambda x: evaluate(tree, x),
        vector_fn=lambda xs: evaluate_many(tree, xs),
    )


def wrap(obj, label: str | None = None) -> FunctionHandle:
    """Handle for a tabular function, another handle, or any callable."""
    if isinstance(obj, Expr):
        return from_expression(obj, label)
    if isinstance(obj, FunctionHandle):
        return obj if label is None else FunctionHandle(label, obj.scalar_fn, obj.vector_fn)
    if not callable(obj):
        raise TypeError(f"cannot wrap {obj!r} as a function")
    return FunctionHandle(
        label=label if label is not None else label_of(obj),
        scalar_fn=obj,
        vector_fn=getattr(obj, "values_at", None),
    )


def label_of(f) -> str:
    """Best-effort human-readable name for a function-like object."""
    lbl = getattr(f, "label", None)
    if isinstance(lbl, str):
        return lbl
    if isinstance(f, Expr):
        return to_source(f)
    name = getattr(f, "__name__", None)
    if isinstance(name, str) and name != "<lambda>":
        return name
    src = getattr(f, "source", None)
    if isinstance(src, str):
        return src
    return type(f).__name__
