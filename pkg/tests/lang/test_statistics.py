""" Test aggregations, random numbers and least squares fitting. """

import math
import statistics

import numpy as np
import pytest

from src.errors import LangError, ResourceError
from src.lang.builtins.statistics import solve_normal_equations
from src.lang.context import EvalContext
from src.lang.evaluator import VALUE_NAME, call_function, run_script
from src.lang.rng import CHECK_INTERVAL, Rng, Xoshiro256PlusPlus
from src.values.value import DataFrame, Vector, logical, numbers


def run(text: str) -> EvalContext:
    ctx = EvalContext()
    run_script(text, ctx)
    return ctx


def values(text: str):
    return run(text).namespace[VALUE_NAME].to_list()


def test_aggregations():
    assert values("sum(1, 2, c(3, 4))") == [10.0]
    assert values("sum(c(1, NA))") == [None]
    assert values("sum(c(1, NA, NaN), na_rm = TRUE)") == [1.0]
    assert values("sum()") == [0.0]
    assert values("sum(c(TRUE, TRUE, FALSE))") == [2.0]
    assert values("mean(c(1, 2, 3, 4))") == [2.5]
    assert values("mean(c(1, NA))") == [None]
    assert values("mean(c(1, NA), na_rm = TRUE)") == [1.0]
    assert values("min(c(3, 1), 2)") == [1.0]
    assert values("max(c(3, 1), 2)") == [3.0]
    assert values("max(c(1, NA))") == [None]
    assert math.isnan(values("max(c(1, NaN))")[0])


def test_standard_deviation():
    assert values("sd(c(1, 2, 3, 4))")[0] == pytest.approx(
        np.std([1, 2, 3, 4], ddof=1)
    )
    assert values("sd(5)") == [None]
    assert values("sd(c(2, NA, 4), na_rm = TRUE)")[0] == pytest.approx(
        math.sqrt(2)
    )


def test_empty_aggregations_warn():
    ctx = run("mean(numeric(0))")
    assert math.isnan(ctx.namespace[VALUE_NAME].element(0))
    assert ctx.warnings == ["mean of an empty vector is NaN"]
    assert ctx.output() == (
        "Warning message:\nmean of an empty vector is NaN\n[1] NaN\n"
    )
    ctx = run("min(numeric(0))")
    assert ctx.namespace[VALUE_NAME].to_list() == [math.inf]
    assert ctx.warnings == ["no non-missing arguments to min; returning Inf"]
    ctx = run("sd(numeric(0))")
    assert ctx.warnings == ["standard deviation of an empty vector is NaN"]


def test_non_numeric_aggregation():
    with pytest.raises(LangError):
        run('mean(c("a", "b"))')
    with pytest.raises(LangError):
        run("sum(list(1))")


def _aggregate(name: str, items):
    if name == "sum":
        return math.fsum(items)
    if not items:
        return {"mean": math.nan, "sd": math.nan}.get(
            name, math.inf if name == "min" else -math.inf
        )
    if name == "mean":
        return math.fsum(items) / len(items)
    if name == "sd":
        return statistics.stdev(items) if len(items) > 1 else None
    return min(items) if name == "min" else max(items)


@pytest.mark.parametrize("name", ["sum", "mean", "sd", "min", "max"])
def test_missing_values_propagate(name):
    rng = np.random.default_rng(13)
    for _ in range(1000):
        size = int(rng.integers(0, 8))
        items = [
            None if rng.random() < 0.2 else float(rng.normal())
            for _ in range(size)
        ]
        kept = [item for item in items if item is not None]
        for na_rm in (False, True):
            result = call_function(
                name,
                [(None, numbers(items)), ("na_rm", logical(na_rm))],
                EvalContext(),
            ).to_list()
            if not na_rm and len(kept) < len(items):
                assert result == [None], items
                continue
            expected = _aggregate(name, kept)
            if expected is None:
                assert result == [None], items
            elif math.isnan(expected):
                assert math.isnan(result[0]), items
            else:
                assert result[0] == pytest.approx(
                    expected, rel=1e-9, abs=1e-12
                ), items


def test_xoshiro():
    with pytest.raises(ValueError):
        Xoshiro256PlusPlus([0, 0, 0, 0])
    with pytest.raises(ValueError):
        Xoshiro256PlusPlus([1, 2, 3])
    first = Xoshiro256PlusPlus.from_seed(42)
    second = Xoshiro256PlusPlus.from_seed(42)
    draws = [first.next() for _ in range(10)]
    assert draws == [second.next() for _ in range(10)]
    assert all(0 <= draw < 2**64 for draw in draws)
    assert Xoshiro256PlusPlus.from_seed(43).next() != draws[0]
    generator = Xoshiro256PlusPlus([1, 2, 3, 4])
    assert generator.next() == 41943041


def test_rng_reproducibility():
    rng = Rng(7)
    first = rng.runif(5)
    rng.set_seed(7)
    assert np.array_equal(first, rng.runif(5))
    assert np.all((first >= 0) & (first < 1))
    assert len(rng.rnorm(3)) == 3
    assert rng.seed == 7

    ctx = run(
        "set_seed(42)\na <- runif(3)\nset_seed(42)\nb <- runif(3)\n"
        "n <- rnorm(5, mean = 10, sd = 0)"
    )
    assert ctx.namespace["a"].to_list() == ctx.namespace["b"].to_list()
    assert ctx.namespace["n"].to_list() == [10.0] * 5


def test_long_draws_check_the_deadline():
    calls = []

    def check():
        calls.append(len(calls))
        if len(calls) > 2:
            raise ResourceError("time limit", "time limit of 1 s exceeded")

    rng = Rng(0, check)
    assert len(rng.runif(CHECK_INTERVAL)) == CHECK_INTERVAL
    assert calls == [0]
    with pytest.raises(ResourceError, match="time limit"):
        rng.rnorm(10**5)
    assert np.array_equal(Rng(3, lambda: None).rnorm(9), Rng(3).rnorm(9))


def test_random_distributions():
    rng = Rng(123)
    uniform = rng.runif(20000, 2.0, 4.0)
    assert uniform.min() >= 2.0
    assert uniform.max() < 4.0
    assert uniform.mean() == pytest.approx(3.0, abs=0.02)
    normal = rng.rnorm(20000, 1.0, 2.0)
    assert normal.mean() == pytest.approx(1.0, abs=0.06)
    assert normal.std() == pytest.approx(2.0, abs=0.06)


def test_random_numbers_are_charged():
    ctx = EvalContext()
    call_function("rnorm", [(None, numbers([10]))], ctx)
    assert ctx.budget.cells_used >= 10
    with pytest.raises(LangError):
        call_function("rnorm", [(None, numbers([-1]))], ctx)


def test_lsfit_exact_line():
    ctx = run("fit <- lsfit(c(1, 2, 3, 4), c(3, 5, 7, 9))\nfit")
    fit = ctx.namespace["fit"]
    assert fit.names == ["coefficients", "residuals", "intercept", "terms"]
    assert fit.get("coefficients").to_list() == pytest.approx([1.0, 2.0])
    assert fit.get("residuals").to_list() == pytest.approx([0.0] * 4)
    assert fit.get("terms").to_list() == ["Intercept", "X"]
    assert fit.get("intercept").to_list() == [True]
    assert ctx.output().startswith("$coefficients\n")


def test_lsfit_matches_least_squares():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rows = int(rng.integers(8, 40))
        columns = int(rng.integers(1, 4))
        x = rng.normal(size=(rows, columns))
        y = rng.normal(size=rows)
        frame = DataFrame(
            (f"v{j}", Vector("number", x[:, j])) for j in range(columns)
        )
        fit = call_function(
            "lsfit",
            [(None, frame), (None, Vector("number", y))],
            EvalContext(),
        )
        design = np.column_stack([np.ones(rows), x])
        expected, *_ = np.linalg.lstsq(design, y, rcond=None)
        assert np.allclose(
            fit.get("coefficients").data, expected, rtol=1e-8, atol=1e-10
        )
        residuals = fit.get("residuals").data
        assert np.allclose(
            residuals, y - design @ expected, rtol=1e-8, atol=1e-10
        )
        assert fit.get("terms").to_list() == ["Intercept"] + [
            f"v{j}" for j in range(columns)
        ]


def test_lsfit_without_intercept():
    ctx = EvalContext()
    fit = call_function(
        "lsfit",
        [
            (None, numbers([1, 2, 3])),
            (None, numbers([2, 4, 6])),
            ("intercept", logical(False)),
        ],
        ctx,
    )
    assert fit.get("coefficients").to_list() == pytest.approx([2.0])
    assert fit.get("terms").to_list() == ["X"]


def test_lsfit_drops_missing_rows():
    ctx = run("lsfit(c(1, 2, NA, 4), c(3, 5, 7, 9))")
    fit = ctx.namespace[VALUE_NAME]
    assert len(fit.get("residuals")) == 3
    assert ctx.warnings == ["1 missing values deleted"]


@pytest.mark.parametrize(
    "text",
    [
        "lsfit(data_frame(a = c(1, 2, 3), b = c(2, 4, 6)), c(1, 2, 3))",
        "lsfit(c(1, 1, 1), c(1, 2, 3))",
        "lsfit(numeric(0), numeric(0))",
    ],
)
def test_lsfit_rank_deficient(text):
    with pytest.raises(LangError) as error:
        run(text)
    assert error.value.kind == "numeric"
    assert "rank deficient" in str(error.value)


def test_lsfit_argument_errors():
    with pytest.raises(LangError) as error:
        run("lsfit(c(1, 2, 3), c(1, 2))")
    assert error.value.kind == "eval"
    with pytest.raises(LangError):
        run('lsfit(c("a", "b"), c(1, 2))')


def test_solve_normal_equations():
    design = np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    y = np.array([1.0, 4.0, 3.0])
    expected, *_ = np.linalg.lstsq(design, y, rcond=None)
    assert np.allclose(solve_normal_equations(design, y), expected)
