"""
Arithmetic and comparison operators. Operands are recycled to the longer
length, NA propagates to every result element it takes part in.
"""

import operator
from typing import Optional, Tuple

import numpy as np

from src.errors import LangError
from src.lang.builtins.coercion import atomic, coerce, common_kind
from src.lang.builtins.registry import builtin
from src.values.value import Value, Vector

ARITHMETIC = {
    "+": (np.add, "Addition"),
    "-": (np.subtract, "Subtraction or negation"),
    "*": (np.multiply, "Multiplication"),
    "/": (np.divide, "Division"),
    "^": (np.power, "Exponentiation"),
}
COMPARISON = {
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}
OPERANDS = {
    "e1": "First operand, a logical or numeric vector.",
    "e2": "Second operand, recycled against the first.",
}


def recycle(ctx, a: Vector, b: Vector) -> Tuple[np.ndarray, np.ndarray]:
    """
    Index arrays recycling two operands to a common length. Zero length
    operands give a zero length result. Charges the result cells.

    :param ctx: The evaluation context.
    :param a: First operand.
    :param b: Second operand.
    :return: Index arrays into a and b.
    """
    if len(a) == 0 or len(b) == 0:
        n = 0
    else:
        n = max(len(a), len(b))
        if n % len(a) or n % len(b):
            ctx.warn(
                "longer object length is not a multiple of shorter object "
                "length"
            )
    ctx.budget.charge(n)
    positions = np.arange(n)
    if n == 0:
        return positions, positions
    return positions % len(a), positions % len(b)


def _numeric_operand(value: Value) -> Vector:
    vector = atomic(value, "operand")
    if vector.kind == "string":
        raise LangError("eval", "non-numeric argument to binary operator")
    return coerce(vector, "number")


def arithmetic(op: str, ctx, e1: Value, e2: Optional[Value]) -> Vector:
    """
    Apply an arithmetic operator with IEEE semantics: x/0 is +-Inf, 0/0 is
    NaN.

    :param op: The operator symbol.
    :param ctx: The evaluation context.
    :param e1: First operand.
    :param e2: Second operand, None for the unary form.
    :return: The number vector.
    """
    a = _numeric_operand(e1)
    if e2 is None:
        if op not in ("+", "-"):
            raise LangError("eval", f"invalid unary operator {op}")
        ctx.budget.charge(len(a))
        data = -a.data if op == "-" else a.data
        return Vector("number", data, a.na, a.scalar)
    b = _numeric_operand(e2)
    ia, ib = recycle(ctx, a, b)
    function = ARITHMETIC[op][0]
    with np.errstate(all="ignore"):
        data = function(a.data[ia], b.data[ib])
    na = a.na[ia] | b.na[ib]
    return Vector("number", data, na, a.scalar and b.scalar)


def compare(op: str, ctx, e1: Value, e2: Value) -> Vector:
    """
    Apply a comparison. If either operand is a string vector both are
    compared as strings, otherwise as numbers. Comparisons involving NA
    or NaN are NA.

    :param op: The operator symbol.
    :param ctx: The evaluation context.
    :param e1: First operand.
    :param e2: Second operand.
    :return: The logical vector.
    """
    a = atomic(e1, "comparison operand")
    b = atomic(e2, "comparison operand")
    kind = "string" if common_kind([a, b]) == "string" else "number"
    a, b = coerce(a, kind), coerce(b, kind)
    ia, ib = recycle(ctx, a, b)
    function = COMPARISON[op]
    left, right = a.data[ia], b.data[ib]
    na = a.na[ia] | b.na[ib]
    if kind == "number":
        na = na | np.isnan(left) | np.isnan(right)
        data = function(left, right)
    else:
        data = [function(x, y) for x, y in zip(left, right)]
    return Vector("logical", data, na, a.scalar and b.scalar)


def _register_arithmetic(op: str, title: str) -> None:
    @builtin(
        op,
        params=("e1", ("e2", None)),
        title=title,
        arguments=OPERANDS,
        description="Element-wise arithmetic on recycled operands. NA in "
        "either operand gives NA.",
    )
    def apply(ctx, e1, e2):
        return arithmetic(op, ctx, e1, e2)


def _register_comparison(op: str) -> None:
    @builtin(
        op,
        params=("e1", "e2"),
        title=f"Comparison {op}",
        arguments=OPERANDS,
        description="Element-wise comparison returning a logical vector.",
    )
    def apply(ctx, e1, e2):
        return compare(op, ctx, e1, e2)


for _op, (_, _title) in ARITHMETIC.items():
    _register_arithmetic(_op, _title)
for _op in COMPARISON:
    _register_comparison(_op)
