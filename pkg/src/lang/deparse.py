"""
Turn syntax trees and values back into canonical source text.

Binary operators are surrounded by single spaces, named arguments are
written as "name = value" and parentheses are only emitted where the
precedence of the grammar requires them, so parse(deparse(e)) == e.
"""

import math

from src.lang.ast import (
    Assign,
    Call,
    Expr,
    FunctionDef,
    Ident,
    Literal,
    is_operator_call,
)
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

PRECEDENCE = {
    "<": 1,
    ">": 1,
    "<=": 1,
    ">=": 1,
    "==": 1,
    "!=": 1,
    "+": 2,
    "-": 2,
    "*": 3,
    "/": 3,
    "^": 4,
}
UNARY = 5
POSTFIX = 6
ATOM = 7
LOWEST = 0
IDENT_CHARS = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789._"
)
KEYWORDS = ("TRUE", "FALSE", "NA", "NaN", "Inf", "NULL", "function")


def quote(text: str) -> str:
    """
    Quote a string as a double quoted literal with backslash escapes.

    :param text: The raw string.
    :return: The literal.
    """
    chars = []
    for char in text:
        if char == "\\":
            chars.append("\\\\")
        elif char == '"':
            chars.append('\\"')
        elif char == "\n":
            chars.append("\\n")
        elif char == "\t":
            chars.append("\\t")
        elif char == "\r":
            chars.append("\\r")
        elif ord(char) < 32:
            chars.append(f"\\u{ord(char):04x}")
        else:
            chars.append(char)
    return '"' + "".join(chars) + '"'


def number_literal(value: float) -> str:
    """
    Canonical text of a finite, non-negative or negative number.

    :param value: The number.
    :return: Integral values below 1e15 without decimals, others by repr.
    """
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _precedence(expr: Expr) -> int:
    if isinstance(expr, (FunctionDef, Assign)):
        return LOWEST
    if is_operator_call(expr):
        if len(expr.args) == 1:
            return UNARY
        return PRECEDENCE[expr.fn.name]
    if isinstance(expr, Call):
        return POSTFIX
    return ATOM


def _wrap(expr: Expr, needed: int) -> str:
    text = deparse(expr)
    if _precedence(expr) < needed:
        return f"({text})"
    return text


def _literal(expr: Literal) -> str:
    if expr.kind == "number":
        return number_literal(expr.value)
    if expr.kind == "string":
        return quote(expr.value)
    if expr.kind == "logical":
        return "TRUE" if expr.value else "FALSE"
    return {"na": "NA", "nan": "NaN", "inf": "Inf", "null": "NULL"}[
        expr.kind
    ]


def _argument_name(name: str) -> str:
    valid = (
        name
        and (name[0].isalpha() or name[0] == ".")
        and set(name) <= IDENT_CHARS
        and name not in KEYWORDS
    )
    return name if valid else quote(name)


def deparse(expr: Expr) -> str:
    """
    Convert a syntax tree into canonical source text.

    :param expr: The node.
    :return: Source text that parses back into an equal node.
    """
    if isinstance(expr, Literal):
        return _literal(expr)
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, Assign):
        return f"{expr.name} <- {deparse(expr.value)}"
    if isinstance(expr, FunctionDef):
        params = []
        for param in expr.params:
            if param.default is None:
                params.append(param.name)
            else:
                params.append(f"{param.name} = {deparse(param.default)}")
        return f"function({', '.join(params)}) {deparse(expr.body)}"
    if is_operator_call(expr):
        op = expr.fn.name
        if len(expr.args) == 1:
            return "-" + _wrap(expr.args[0].value, UNARY)
        left, right = expr.args[0].value, expr.args[1].value
        level = PRECEDENCE[op]
        if op == "^":
            return f"{_wrap(left, level + 1)} ^ {_wrap(right, level)}"
        return f"{_wrap(left, level)} {op} {_wrap(right, level + 1)}"
    if isinstance(expr, Call):
        args = []
        for arg in expr.args:
            if arg.name is None:
                args.append(deparse(arg.value))
            else:
                name = _argument_name(arg.name)
                args.append(f"{name} = {deparse(arg.value)}")
        return f"{_wrap(expr.fn, POSTFIX)}({', '.join(args)})"
    raise ValueError(f"Cannot deparse {expr!r}!")


def _element(vector: Vector, index: int) -> str:
    item = vector.element(index)
    if item is None:
        return "NA"
    if vector.kind == "number":
        return number_literal(item)
    if vector.kind == "logical":
        return "TRUE" if item else "FALSE"
    return quote(item)


def deparse_call(name: str, args) -> str:
    """
    Canonical source of an RPC function call.

    :param name: The function name.
    :param args: Ordered (name, value) pairs, name None for positional.
    :return: Source text, e.g. rnorm(n = 3).
    """
    parts = []
    for arg_name, value in args:
        text = deparse_value(value)
        parts.append(text if arg_name is None else f"{arg_name} = {text}")
    return f"{name}({', '.join(parts)})"


def deparse_value(value: Value) -> str:
    """
    Render a value as source text.

    :param value: The value.
    :return: Source text constructing an equal value where the language
        can express it.
    """
    if isinstance(value, Null):
        return "NULL"
    if isinstance(value, Vector):
        elements = [_element(value, i) for i in range(len(value))]
        if value.scalar:
            return elements[0]
        if not elements:
            return {
                "logical": "logical(0)",
                "number": "numeric(0)",
                "string": "character(0)",
            }[value.kind]
        return f"c({', '.join(elements)})"
    if isinstance(value, ListValue):
        items = [
            f"{_argument_name(name)} = {deparse_value(item)}"
            for name, item in value.items
        ]
        return f"list({', '.join(items)})"
    if isinstance(value, DataFrame):
        columns = [
            f"{_argument_name(name)} = {deparse_value(column)}"
            for name, column in value.columns
        ]
        return f"data_frame({', '.join(columns)})"
    if isinstance(value, Closure):
        return deparse(FunctionDef(value.params, value.body))
    if isinstance(value, Builtin):
        return value.name
    if isinstance(value, GraphicsRecording):
        return f"<graphic with {len(value.commands)} commands>"
    raise ValueError(f"Cannot deparse {value!r}!")
