"""
Aggregations, random numbers and least squares fitting.

Aggregations return NA if any element is NA unless na_rm is TRUE, in which
case NA and NaN elements are removed before aggregating.
"""

import math
from typing import List, Tuple

import numpy as np

from src.errors import LangError
from src.lang.builtins.coercion import (
    concatenate,
    count,
    flag,
    numeric,
    present,
    scalar_number,
)
from src.lang.builtins.registry import DOTS, builtin
from src.values.value import (
    NULL,
    DataFrame,
    ListValue,
    Value,
    Vector,
    logical,
    number,
    numbers,
    strings,
)

FALSE = logical(False)
TRUE = logical(True)
NA_RM = "Remove NA and NaN elements before aggregating."
RANK_TOLERANCE = 1e-10


def _collect(ctx, values: List[Value], what: str) -> Vector:
    vectors = [numeric(value, what) for value in values]
    ctx.budget.charge(sum(len(vector) for vector in vectors))
    return concatenate(vectors, "number")


def _remove_missing(vector: Vector, na_rm: Value) -> Tuple[np.ndarray, bool]:
    """
    Apply the na_rm rule.

    :param vector: Number vector.
    :param na_rm: The na_rm argument.
    :return: Tuple (elements, has_na). has_na is True if NA elements were
        found and na_rm is FALSE.
    """
    if flag(na_rm, "na_rm"):
        return vector.data[present(vector)], False
    return vector.data, bool(vector.na.any())


@builtin(
    "sum",
    params=(DOTS, ("na_rm", FALSE)),
    title="Sum of values",
    arguments={"...": "Numeric or logical vectors.", "na_rm": NA_RM},
)
def sum_(ctx, dots, na_rm):
    data, has_na = _remove_missing(
        _collect(ctx, [value for _, value in dots], "sum argument"), na_rm
    )
    if has_na:
        return number(None)
    return number(float(np.sum(data)))


@builtin(
    "mean",
    params=("x", ("na_rm", FALSE)),
    title="Arithmetic mean",
    arguments={"x": "A numeric or logical vector.", "na_rm": NA_RM},
    description="The mean of an empty vector is NaN with a warning.",
)
def mean(ctx, x, na_rm):
    data, has_na = _remove_missing(numeric(x, "'x'"), na_rm)
    if has_na:
        return number(None)
    if data.size == 0:
        ctx.warn("mean of an empty vector is NaN")
        return number(math.nan)
    return number(float(np.mean(data)))


@builtin(
    "sd",
    params=("x", ("na_rm", FALSE)),
    title="Standard deviation",
    arguments={"x": "A numeric or logical vector.", "na_rm": NA_RM},
    description="Sample standard deviation with denominator n - 1. The "
    "standard deviation of an empty vector is NaN with a warning, of a "
    "single element NA.",
)
def sd(ctx, x, na_rm):
    data, has_na = _remove_missing(numeric(x, "'x'"), na_rm)
    if has_na:
        return number(None)
    if data.size == 0:
        ctx.warn("standard deviation of an empty vector is NaN")
        return number(math.nan)
    if data.size == 1:
        return number(None)
    return number(float(np.std(data, ddof=1)))


def _extreme(ctx, dots, na_rm, name: str) -> Vector:
    data, has_na = _remove_missing(
        _collect(ctx, [value for _, value in dots], f"{name} argument"),
        na_rm,
    )
    if has_na:
        return number(None)
    if data.size == 0:
        empty = math.inf if name == "min" else -math.inf
        ctx.warn(
            f"no non-missing arguments to {name}; returning "
            f"{'Inf' if empty > 0 else '-Inf'}"
        )
        return number(empty)
    if np.isnan(data).any():
        return number(math.nan)
    function = np.min if name == "min" else np.max
    return number(float(function(data)))


@builtin(
    "min",
    params=(DOTS, ("na_rm", FALSE)),
    title="Minimum",
    arguments={"...": "Numeric or logical vectors.", "na_rm": NA_RM},
)
def min_(ctx, dots, na_rm):
    return _extreme(ctx, dots, na_rm, "min")


@builtin(
    "max",
    params=(DOTS, ("na_rm", FALSE)),
    title="Maximum",
    arguments={"...": "Numeric or logical vectors.", "na_rm": NA_RM},
)
def max_(ctx, dots, na_rm):
    return _extreme(ctx, dots, na_rm, "max")


@builtin(
    "set_seed",
    params=("seed",),
    title="Seed the random number generator",
    invisible=True,
    arguments={"seed": "A whole number."},
    description="Seeds xoshiro256++ through splitmix64, so equal seeds "
    "give equal random numbers on every server.",
)
def set_seed(ctx, seed):
    value = scalar_number(seed, "seed")
    if not math.isfinite(value):
        raise LangError("eval", "supplied seed is not a valid integer")
    ctx.rng.set_seed(int(value))
    return NULL


@builtin(
    "rnorm",
    params=("n", ("mean", number(0)), ("sd", number(1))),
    title="Normal random numbers",
    arguments={
        "n": "Number of observations.",
        "mean": "Mean of the distribution.",
        "sd": "Standard deviation of the distribution.",
    },
)
def rnorm(ctx, n, mean, sd):
    size = count(n, "n")
    location = scalar_number(mean, "mean")
    scale = scalar_number(sd, "sd")
    ctx.budget.charge(size)
    return Vector("number", ctx.rng.rnorm(size, location, scale))


@builtin(
    "runif",
    params=("n", ("min", number(0)), ("max", number(1))),
    title="Uniform random numbers",
    arguments={
        "n": "Number of observations.",
        "min": "Lower limit of the distribution.",
        "max": "Upper limit of the distribution.",
    },
)
def runif(ctx, n, **limits):
    size = count(n, "n")
    low = scalar_number(limits["min"], "min")
    high = scalar_number(limits["max"], "max")
    ctx.budget.charge(size)
    return Vector("number", ctx.rng.runif(size, low, high))


def _regressors(x: Value) -> List[Tuple[str, Vector]]:
    if isinstance(x, DataFrame):
        columns = list(x.columns)
    elif isinstance(x, ListValue):
        columns = list(x.items)
    else:
        columns = [("X", x)]
    if not columns:
        raise LangError("eval", "'x' has no columns")
    return [
        (name, numeric(column, f"'x' column {name}"))
        for name, column in columns
    ]


def solve_normal_equations(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Solve the normal equations X'X b = X'y by Gaussian elimination with
    partial pivoting.

    :param design: The n x p design matrix.
    :param y: The response of length n.
    :raise LangError: A numeric error if the design is rank deficient,
        i.e. a pivot is not larger than 1e-10 times the largest diagonal
        element of X'X.
    :return: The coefficients.
    """
    a = design.T @ design
    b = design.T @ y
    size = a.shape[0]
    tolerance = RANK_TOLERANCE * float(np.max(np.abs(np.diag(a))))
    for k in range(size):
        pivot = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[pivot, k]) <= tolerance:
            raise LangError(
                "numeric",
                "rank deficient design matrix: the columns of 'x' are "
                "collinear",
            )
        if pivot != k:
            a[[k, pivot]] = a[[pivot, k]]
            b[[k, pivot]] = b[[pivot, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :] -= np.outer(factors, a[k])
        b[k + 1 :] -= factors * b[k]
    coefficients = np.zeros(size)
    for k in range(size - 1, -1, -1):
        residual = b[k] - a[k, k + 1 :] @ coefficients[k + 1 :]
        coefficients[k] = residual / a[k, k]
    return coefficients


@builtin(
    "lsfit",
    params=("x", "y", ("intercept", TRUE)),
    title="Least squares fit",
    arguments={
        "x": "The regressors: a numeric vector, a data frame or a list of "
        "numeric columns.",
        "y": "The numeric response.",
        "intercept": "Whether to add an intercept term.",
    },
    description="Fits y by least squares on the columns of x through the "
    "normal equations. Rows with missing values are removed with a "
    "warning. Collinear regressors raise a rank deficiency error.",
)
def lsfit(ctx, x, y, intercept):
    columns = _regressors(x)
    response = numeric(y, "'y'")
    rows = len(response)
    if any(len(column) != rows for _, column in columns):
        raise LangError("eval", "number of rows of 'x' and 'y' differ")
    names = [name for name, _ in columns]
    data = [column.data for _, column in columns]
    masks = [present(column) for _, column in columns]
    if flag(intercept, "intercept"):
        names.insert(0, "Intercept")
        data.insert(0, np.ones(rows))
    ctx.budget.charge(rows * (len(names) + 2) + len(names) ** 2)
    keep = np.logical_and.reduce(masks + [present(response)])
    dropped = int(rows - keep.sum())
    if dropped:
        ctx.warn(f"{dropped} missing values deleted")
    design = np.column_stack(data)[keep]
    observed = response.data[keep]
    coefficients = solve_normal_equations(design, observed)
    residuals = observed - design @ coefficients
    return ListValue(
        [
            ("coefficients", Vector("number", coefficients)),
            ("residuals", numbers(residuals.tolist())),
            ("intercept", logical(flag(intercept, "intercept"))),
            ("terms", strings(names)),
        ]
    )
