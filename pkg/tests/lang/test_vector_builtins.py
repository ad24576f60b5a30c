""" Test the vector, list and data frame builtins. """

import numpy as np
import pytest

from src.errors import LangError
from src.formats.printing import format_number
from src.lang.builtins import BUILTINS, BuiltinFactory
from src.lang.context import EvalContext
from src.lang.evaluator import VALUE_NAME, run_script
from src.values.value import NULL, DataFrame, ListValue


def value_of(text: str):
    ctx = EvalContext()
    run_script(text, ctx)
    return ctx.namespace[VALUE_NAME]


def values(text: str):
    return value_of(text).to_list()


def test_builtin_catalog():
    for name in [
        "c",
        "length",
        "sum",
        "mean",
        "sd",
        "min",
        "max",
        "sort",
        "rev",
        "head",
        "seq",
        "rep",
        "names",
        "nrow",
        "ncol",
        "paste",
        "print",
        "identity",
        "is_na",
        "data_frame",
        "read_csv",
        "write_csv",
        "set_seed",
        "rnorm",
        "runif",
        "lsfit",
        "plot",
        "hist",
        "title",
        "list",
        "numeric",
        "+",
        "^",
        "!=",
    ]:
        assert name in BUILTINS
        assert BuiltinFactory.get(name).title
    assert list(BuiltinFactory.names()) == sorted(BUILTINS.keys())
    with pytest.raises(ValueError):
        BuiltinFactory.get("rlm")


def test_combine():
    assert values("c(1, TRUE, NA)") == [1.0, 1.0, None]
    assert values('c("a", 1, TRUE)') == ["a", "1", "TRUE"]
    assert values("c(1.5, NULL, 2)") == [1.5, 2.0]
    assert value_of("c()") is NULL
    assert value_of("c(NULL)") is NULL


def test_length():
    assert values("length(c(1, 2, 3))") == [3.0]
    assert values("length(NULL)") == [0.0]
    assert values("length(list(1, 2))") == [2.0]
    assert values("length(data_frame(a = 1, b = 2))") == [2.0]


def test_sort_and_rev():
    assert values("sort(c(3, 1, NA, 2))") == [1.0, 2.0, 3.0]
    assert values("sort(c(3, 1, 2), decreasing = TRUE)") == [3.0, 2.0, 1.0]
    assert values('sort(c("b", "a", NA))') == ["a", "b"]
    assert values("rev(c(1, NA, 3))") == [3.0, None, 1.0]
    assert value_of("rev(list(a = 1, b = 2))").names == ["b", "a"]


def test_head():
    assert values("head(seq(10), 3)") == [1.0, 2.0, 3.0]
    assert values("head(seq(10), -8)") == [1.0, 2.0]
    assert values("head(c(1, 2), 5)") == [1.0, 2.0]
    assert len(value_of("head(seq(10))")) == 6
    frame = value_of("head(data_frame(x = seq(5)), 2)")
    assert isinstance(frame, DataFrame)
    assert frame.nrow == 2


def test_seq():
    assert values("seq(5)") == [1.0, 2.0, 3.0, 4.0, 5.0]
    assert values("seq(2, 10, by = 2)") == [2.0, 4.0, 6.0, 8.0, 10.0]
    assert values("seq(5, 1)") == [5.0, 4.0, 3.0, 2.0, 1.0]
    assert values("seq(0, 1, length_out = 5)") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert values("seq(1, by = 3, length_out = 3)") == [1.0, 4.0, 7.0]
    assert values("seq(0, 1, by = 0.1)")[-1] == pytest.approx(1.0)
    assert len(value_of("seq(0, 1, by = 0.1)")) == 11
    with pytest.raises(LangError):
        value_of("seq(1, 2, by = -1)")
    with pytest.raises(LangError):
        value_of("seq(1, Inf)")


def test_rep():
    assert values("rep(c(1, 2), times = 2)") == [1.0, 2.0, 1.0, 2.0]
    assert values("rep(c(1, 2), each = 2)") == [1.0, 1.0, 2.0, 2.0]
    assert values('rep(c("a", NA), 2)') == ["a", None, "a", None]
    assert values("rep(1, 0)") == []
    with pytest.raises(LangError):
        value_of("rep(1, -1)")


def test_names_nrow_ncol():
    assert values("names(list(a = 1, 2))") == ["a", "2"]
    assert values("names(data_frame(x = 1, y = 2))") == ["x", "y"]
    assert value_of("names(c(1, 2))") is NULL
    assert values("nrow(data_frame(x = c(1, 2, 3)))") == [3.0]
    assert values("ncol(data_frame(x = c(1, 2, 3)))") == [1.0]
    assert value_of("nrow(c(1, 2))") is NULL


def test_paste():
    assert values('paste("a", c(1, 2))') == ["a 1", "a 2"]
    assert values('paste("a", "b", sep = "")') == ["ab"]
    assert values('paste(c("x", "y"), collapse = "+")') == ["x+y"]
    assert values('paste("v", NA, TRUE)') == ["v NA TRUE"]
    assert values("paste(1.5)") == ["1.5"]
    assert values("paste()") == []
    assert value_of('paste("a")').scalar


def test_list_and_empty_vectors():
    items = value_of("list(1, b = 2)")
    assert isinstance(items, ListValue)
    assert items.names == ["1", "b"]
    with pytest.raises(LangError):
        value_of("list(a = 1, a = 2)")
    assert values("numeric(3)") == [0.0, 0.0, 0.0]
    assert values("character(2)") == ["", ""]
    assert values("logical(1)") == [False]
    assert values("numeric()") == []


def test_is_na_and_identity():
    assert values("is_na(c(1, NA, NaN))") == [False, True, True]
    assert values('is_na(c("a", NA))') == [False, True]
    assert values("identity(c(1, 2))") == [1.0, 2.0]
    with pytest.raises(LangError):
        value_of("is_na(mean)")


def test_data_frame():
    frame = value_of('data_frame(a = c(1, 2), b = "x")')
    assert frame.names == ["a", "b"]
    assert frame.column("b").to_list() == ["x", "x"]
    assert value_of("data_frame()").ncol == 0
    with pytest.raises(LangError):
        value_of("data_frame(c(1, 2))")
    with pytest.raises(LangError) as error:
        value_of("data_frame(a = c(1, 2), b = c(1, 2, 3))")
    assert "differing number of rows: 2, 3" in str(error.value)


INNER = {
    "identity": lambda v: v,
    "rev": lambda v: v[::-1],
    "sort": np.sort,
    "head": lambda v: v[:6],
}
OUTER = {
    "c": lambda a, b: np.concatenate([a, b]),
    "sum": lambda a, b: [np.sum(a) + np.sum(b)],
    "min": lambda a, b: [min(np.min(a), np.min(b))],
    "max": lambda a, b: [max(np.max(a), np.max(b))],
    "paste": lambda a, b: [
        f"{format_number(p)} {format_number(q)}" for p, q in zip(a, b)
    ],
}


def _literal(data: np.ndarray) -> str:
    return f"c({', '.join(repr(float(item)) for item in data)})"


def test_random_compositions():
    rng = np.random.default_rng(21)
    for _ in range(50):
        size = int(rng.integers(1, 7))
        x = np.round(rng.normal(size=size) * 10, 2) + 0.0
        y = np.round(rng.normal(size=size) * 10, 2) + 0.0
        f = list(OUTER)[int(rng.integers(0, len(OUTER)))]
        g, h = (list(INNER)[int(i)] for i in rng.integers(0, len(INNER), 2))
        text = f"{f}({g}({_literal(x)}), {h}({_literal(y)}))"
        expected = OUTER[f](INNER[g](x), INNER[h](y))
        if f == "paste":
            assert values(text) == list(expected), text
        else:
            assert values(text) == pytest.approx(list(expected)), text
