""" Builtins constructing and reshaping vectors, lists and data frames. """

import math

import numpy as np

from src.errors import LangError
from src.lang.builtins.coercion import (
    atomic,
    coerce,
    common_kind,
    concatenate,
    count,
    flag,
    present,
    scalar_number,
    text,
    type_name,
)
from src.lang.builtins.registry import DOTS, builtin
from src.values.value import (
    NULL,
    DataFrame,
    Function,
    ListValue,
    Null,
    Vector,
    number,
    strings,
)


@builtin(
    "c",
    params=(DOTS,),
    title="Combine values into a vector",
    arguments={"...": "Atomic vectors to combine, NULL is dropped."},
    description="Concatenates its arguments into one vector. The result "
    "kind is the highest of logical < numeric < character among the "
    "arguments; c() without arguments is NULL.",
)
def combine(ctx, dots):
    vectors = []
    for _, value in dots:
        if isinstance(value, Null):
            continue
        if not isinstance(value, Vector):
            raise LangError(
                "eval", f"cannot combine {type_name(value)} values with c()"
            )
        vectors.append(value)
    if not vectors:
        return NULL
    ctx.budget.charge(sum(len(vector) for vector in vectors))
    return concatenate(vectors, common_kind(vectors))


@builtin(
    "length",
    params=("x",),
    title="Length of a value",
    arguments={"x": "Any value."},
)
def length(ctx, x):
    if isinstance(x, Null):
        return number(0)
    if isinstance(x, (Vector, ListValue)):
        return number(len(x))
    if isinstance(x, DataFrame):
        return number(x.ncol)
    return number(1)


@builtin(
    "sort",
    params=("x", ("decreasing", Vector("logical", [False], scalar=True))),
    title="Sort a vector",
    arguments={
        "x": "An atomic vector.",
        "decreasing": "Sort in decreasing order.",
    },
    description="Returns the sorted elements. NA and NaN are removed.",
)
def sort(ctx, x, decreasing):
    vector = atomic(x, "'x'")
    ctx.budget.charge(len(vector))
    kept = vector.data[present(vector)]
    if vector.kind == "string":
        ordered = sorted(kept, reverse=flag(decreasing, "decreasing"))
        return Vector("string", ordered)
    ordered = np.sort(kept, kind="stable")
    if flag(decreasing, "decreasing"):
        ordered = ordered[::-1]
    return Vector(vector.kind, ordered)


@builtin(
    "rev",
    params=("x",),
    title="Reverse a vector or list",
    arguments={"x": "An atomic vector or a list."},
)
def rev(ctx, x):
    if isinstance(x, ListValue):
        return ListValue(reversed(x.items))
    vector = atomic(x, "'x'")
    ctx.budget.charge(len(vector))
    return Vector(vector.kind, vector.data[::-1], vector.na[::-1])


def _head_count(n: int, total: int) -> int:
    if n >= 0:
        return min(n, total)
    return max(total + n, 0)


@builtin(
    "head",
    params=("x", ("n", number(6))),
    title="First elements or rows",
    arguments={
        "x": "A vector, list or data frame.",
        "n": "Number of elements to keep, negative n drops from the end.",
    },
)
def head(ctx, x, n):
    size = scalar_number(n, "n")
    if not math.isfinite(size):
        raise LangError("eval", "invalid 'n' argument")
    size = int(size)
    if isinstance(x, DataFrame):
        keep = _head_count(size, x.nrow)
        ctx.budget.charge(keep * x.ncol)
        return DataFrame(
            (name, Vector(column.kind, column.data[:keep], column.na[:keep]))
            for name, column in x.columns
        )
    if isinstance(x, ListValue):
        return ListValue(x.items[: _head_count(size, len(x))])
    vector = atomic(x, "'x'")
    keep = _head_count(size, len(vector))
    ctx.budget.charge(keep)
    return Vector(vector.kind, vector.data[:keep], vector.na[:keep])


def _sequence_length(span: float, step: float) -> int:
    if step == 0:
        if span == 0:
            return 1
        raise LangError("eval", "invalid '(to - from)/by' in seq(.)")
    ratio = span / step
    if ratio < 0:
        raise LangError("eval", "wrong sign in 'by' argument")
    if not math.isfinite(ratio):
        raise LangError("eval", "invalid '(to - from)/by' in seq(.)")
    return int(math.floor(ratio + 1e-10)) + 1


@builtin(
    "seq",
    params=(
        ("from", None),
        ("to", None),
        ("by", None),
        ("length_out", None),
    ),
    title="Regular sequences",
    arguments={
        "from": "Start of the sequence.",
        "to": "End of the sequence.",
        "by": "Increment of the sequence.",
        "length_out": "Desired length of the sequence.",
    },
    description="seq(n) counts from 1 to n, seq(from, to) steps by one "
    "in the direction of to, by and length_out give the increment or the "
    "number of elements.",
)
def seq(ctx, **params):
    start = params["from"]
    end, by, length_out = params["to"], params["by"], params["length_out"]
    only_start = end is None and by is None and length_out is None
    if only_start and start is not None:
        start, end = number(1), start
    first = 1.0 if start is None else scalar_number(start, "from")
    if length_out is not None:
        size = count(length_out, "length_out")
        ctx.budget.charge(size)
        if end is not None and by is None:
            last = scalar_number(end, "to")
            if start is None:
                first = last - (size - 1)
            if size == 1:
                data = np.array([first])
            else:
                data = first + (last - first) * np.arange(size) / (size - 1)
            return Vector("number", data)
        step = 1.0 if by is None else scalar_number(by, "by")
        if start is None and end is not None:
            first = scalar_number(end, "to") - step * (size - 1)
        return Vector("number", first + step * np.arange(size))
    last = 1.0 if end is None else scalar_number(end, "to")
    if not (math.isfinite(first) and math.isfinite(last)):
        raise LangError("eval", "'from' and 'to' must be finite numbers")
    if by is None:
        step = 1.0 if last >= first else -1.0
    else:
        step = scalar_number(by, "by")
    size = _sequence_length(last - first, step)
    ctx.budget.charge(size)
    return Vector("number", first + step * np.arange(size))


@builtin(
    "rep",
    params=("x", ("times", number(1)), ("each", number(1))),
    title="Replicate elements",
    arguments={
        "x": "An atomic vector.",
        "times": "Number of times to repeat the whole vector.",
        "each": "Number of times to repeat every element.",
    },
)
def rep(ctx, x, times, each):
    vector = atomic(x, "'x'")
    repeat_all = count(times, "times")
    repeat_each = count(each, "each")
    ctx.budget.charge(len(vector) * repeat_all * repeat_each)
    data = np.tile(np.repeat(vector.data, repeat_each), repeat_all)
    na = np.tile(np.repeat(vector.na, repeat_each), repeat_all)
    return Vector(vector.kind, data, na)


@builtin(
    "names",
    params=("x",),
    title="Names of a list or data frame",
    arguments={"x": "A list or data frame."},
    description="Vectors carry no names, names() of a vector is NULL.",
)
def names(ctx, x):
    if isinstance(x, (ListValue, DataFrame)):
        ctx.budget.charge(len(x.names))
        return strings(x.names)
    return NULL


@builtin(
    "nrow",
    params=("x",),
    title="Number of rows",
    arguments={"x": "A data frame."},
)
def nrow(ctx, x):
    return number(x.nrow) if isinstance(x, DataFrame) else NULL


@builtin(
    "ncol",
    params=("x",),
    title="Number of columns",
    arguments={"x": "A data frame."},
)
def ncol(ctx, x):
    return number(x.ncol) if isinstance(x, DataFrame) else NULL


def _as_strings(vector: Vector) -> Vector:
    converted = coerce(vector, "string")
    data = np.where(converted.na, "NA", converted.data).astype(object)
    return Vector("string", data, None, vector.scalar)


@builtin(
    "paste",
    params=(
        DOTS,
        ("sep", Vector("string", [" "], scalar=True)),
        ("collapse", NULL),
    ),
    title="Concatenate strings",
    arguments={
        "...": "Vectors converted to character and recycled.",
        "sep": "Separator between the arguments.",
        "collapse": "Optional separator joining all results into one "
        "string.",
    },
)
def paste(ctx, dots, sep, collapse):
    separator = text(sep, "sep")
    joiner = text(collapse, "collapse", allow_null=True)
    vectors = []
    for _, value in dots:
        vector = atomic(value, "paste argument")
        if len(vector):
            vectors.append(_as_strings(vector))
    size = max((len(vector) for vector in vectors), default=0)
    ctx.budget.charge(size)
    rows = [
        separator.join(str(vector.data[i % len(vector)]) for vector in vectors)
        for i in range(size)
    ]
    if joiner is not None:
        return Vector("string", [joiner.join(rows)], scalar=True)
    scalar = bool(vectors) and all(vector.scalar for vector in vectors)
    return Vector("string", rows, None, scalar)


@builtin(
    "identity",
    params=("x",),
    title="Return the argument unchanged",
    arguments={"x": "Any value."},
)
def identity(ctx, x):
    return x


@builtin(
    "list",
    params=(DOTS,),
    title="Create a list",
    arguments={"...": "The elements, unnamed ones are named by position."},
)
def list_(ctx, dots):
    items = [
        (str(index) if name is None else name, value)
        for index, (name, value) in enumerate(dots, start=1)
    ]
    ctx.budget.charge(1 + len(items))
    try:
        return ListValue(items)
    except ValueError as error:
        raise LangError("eval", str(error).rstrip("!"))


def _empty_vector(kind: str):
    def create(ctx, length):
        size = count(length, "length")
        ctx.budget.charge(size)
        fill = {"logical": False, "number": 0.0, "string": ""}[kind]
        return Vector(kind, [fill] * size)

    return create


for _name, _kind, _title in (
    ("logical", "logical", "Create a logical vector of FALSE values"),
    ("numeric", "number", "Create a numeric vector of zeros"),
    ("character", "string", "Create a character vector of empty strings"),
):
    builtin(
        _name,
        params=(("length", number(0)),),
        title=_title,
        arguments={"length": "Length of the vector."},
    )(_empty_vector(_kind))


@builtin(
    "is_na",
    params=("x",),
    title="Test for missing values",
    arguments={"x": "An atomic vector."},
    description="TRUE for NA elements and for NaN.",
)
def is_na(ctx, x):
    if isinstance(x, Function):
        raise LangError("eval", "is_na() applied to a function")
    vector = atomic(x, "'x'")
    ctx.budget.charge(len(vector))
    return Vector("logical", ~present(vector), None, vector.scalar)


@builtin(
    "data_frame",
    params=(DOTS,),
    title="Create a data frame",
    arguments={"...": "Named column vectors, recycled to a common length."},
)
def data_frame(ctx, dots):
    columns = []
    for name, value in dots:
        if name is None:
            raise LangError("eval", "all data_frame arguments must be named")
        columns.append((name, atomic(value, f"column '{name}'")))
    size = max((len(column) for _, column in columns), default=0)
    for name, column in columns:
        if (len(column) == 0 and size > 0) or (size and size % len(column)):
            lengths = ", ".join(str(len(column)) for _, column in columns)
            raise LangError(
                "eval", f"arguments imply differing number of rows: {lengths}"
            )
    ctx.budget.charge(1 + size * len(columns))
    positions = np.arange(size)
    recycled = []
    for name, column in columns:
        index = positions % len(column) if size else positions
        recycled.append(
            (name, Vector(column.kind, column.data[index], column.na[index]))
        )
    try:
        return DataFrame(recycled)
    except ValueError as error:
        raise LangError("eval", str(error).rstrip("!"))
