"""Calculus operations built on two kinds of averages.

Integrals come from arithmetic means of sampled function values (interval
width times the mean), antiderivatives from integrals with a moving upper
endpoint, and derivatives from secant slopes (graphic means) over shrinking
intervals.  Functions may be given as formulas, as tables of data, or as
plain Python callables.
"""

from .expr import (
    DAPair,
    EvalError,
    Expr,
    ParseError,
    builtin_da_table,
    evaluate,
    evaluate_many,
    lookup_da_pair,
    parse,
    power_pair,
    to_source,
)
from .functions import FunctionHandle, from_expression, label_of, wrap
from .sampling import (
    DEFAULT_SEED,
    SHIPPED_SEEDS,
    Interval,
    SamplePlan,
    convenience_sample,
    derive_seed,
    random_sample,
    uniform_sample,
)
from .mean_integral import (
    AntiderivativeGrid,
    ConvergenceReport,
    IntegralResult,
    MeanEstimate,
    TrialRow,
    antiderivative_grid,
    arithmetic_mean,
    convergence_study,
    display_round,
    ftc_evaluate,
    function_mean,
    integral,
    spacing_weighted_mean,
)
from .derivative import (
    DAPairReport,
    DerivativeEstimate,
    derivative_at,
    graphic_mean,
    verify_da_pair,
)
from .tabular import (
    CsvError,
    TabularFunction,
    fredericksburg,
    fredericksburg_path,
    interpolate,
    load_csv,
    load_csv_path,
    tabular_integral,
    tabular_mean,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # expressions
    "Expr", "ParseError", "EvalError", "parse", "to_source", "evaluate",
    "evaluate_many", "DAPair", "builtin_da_table", "power_pair", "lookup_da_pair",
    # function handles
    "FunctionHandle", "from_expression", "wrap", "label_of",
    # sampling
    "Interval", "SamplePlan", "uniform_sample", "random_sample",
    "convenience_sample", "derive_seed", "DEFAULT_SEED", "SHIPPED_SEEDS",
    # means and integrals
    "MeanEstimate", "IntegralResult", "AntiderivativeGrid", "TrialRow",
    "ConvergenceReport", "arithmetic_mean", "spacing_weighted_mean",
    "function_mean", "integral", "antiderivative_grid", "ftc_evaluate",
    "convergence_study", "display_round",
    # derivatives
    "DerivativeEstimate", "DAPairReport", "graphic_mean", "derivative_at",
    "verify_da_pair",
    # tabular data
    "TabularFunction", "CsvError", "load_csv", "load_csv_path",
    "fredericksburg", "fredericksburg_path", "tabular_mean", "interpolate",
    "tabular_integral",
]
