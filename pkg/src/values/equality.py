""" Structural equality of values. """

import numpy as np

from src.values.graphics import GraphicsRecording
from src.values.value import (
    Builtin,
    Closure,
    DataFrame,
    ListValue,
    Null,
    Value,
    Vector,
)


def _vectors_equal(a: Vector, b: Vector) -> bool:
    """
    Compare two vectors at storage level: NA equals NA, NaN equals NaN,
    -0 equals +0.
    """
    if a.kind != b.kind or a.scalar != b.scalar or len(a) != len(b):
        return False
    if not np.array_equal(a.na, b.na):
        return False
    present = ~a.na
    if a.kind == "number":
        left = a.data[present]
        right = b.data[present]
        both_nan = np.isnan(left) & np.isnan(right)
        return bool(np.all((left == right) | both_nan))
    return bool(np.all(a.data[present] == b.data[present]))


def deep_equals(a: Value, b: Value) -> bool:
    """
    Structural equality of two values. Functions compare by parameter list
    and body, not by their defining namespace.

    :param a: First value.
    :param b: Second value.
    :return: Whether the values are structurally equal.
    """
    if isinstance(a, Null) or isinstance(b, Null):
        return isinstance(a, Null) and isinstance(b, Null)
    if isinstance(a, Vector) and isinstance(b, Vector):
        return _vectors_equal(a, b)
    if isinstance(a, ListValue) and isinstance(b, ListValue):
        return a.names == b.names and all(
            deep_equals(x, y)
            for (_, x), (_, y) in zip(a.items, b.items)
        )
    if isinstance(a, DataFrame) and isinstance(b, DataFrame):
        return a.names == b.names and all(
            _vectors_equal(x, y)
            for (_, x), (_, y) in zip(a.columns, b.columns)
        )
    if isinstance(a, Closure) and isinstance(b, Closure):
        return a.params == b.params and a.body == b.body
    if isinstance(a, Builtin) and isinstance(b, Builtin):
        return a.name == b.name
    if isinstance(a, GraphicsRecording) and isinstance(b, GraphicsRecording):
        return a == b
    return False


def namespaces_equal(a, b) -> bool:
    """
    Compare two namespaces name by name with deep_equals.

    :param a: First namespace mapping.
    :param b: Second namespace mapping.
    :return: Whether both hold the same names with equal values.
    """
    if sorted(a.keys()) != sorted(b.keys()):
        return False
    return all(deep_equals(a[name], b[name]) for name in a.keys())
