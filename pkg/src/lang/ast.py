"""
Syntax tree of the embedded language. Operators are desugared into calls
of the builtin operator functions, so the tree only knows literals,
identifiers, calls, function literals and top level assignments.
Source positions never take part in equality.
"""

from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

OPERATORS = ("+", "-", "*", "/", "^", "<", ">", "<=", ">=", "==", "!=")


@dataclass(frozen=True)
class Expr:
    """
    Base class of all syntax tree nodes
    """


@dataclass(frozen=True)
class Literal(Expr):
    """
    Constant: kind is number, string, logical, na, nan, inf or null.
    """

    kind: str
    value: Any = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Ident(Expr):
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Arg:
    """
    One call argument, name is None for positional arguments.
    """

    name: Optional[str]
    value: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: Expr
    args: Tuple[Arg, ...] = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Param:
    name: str
    default: Optional[Expr] = None


@dataclass(frozen=True)
class FunctionDef(Expr):
    params: Tuple[Param, ...]
    body: Expr
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign(Expr):
    """
    Top level assignment name <- value.
    """

    name: str
    value: Expr
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Statement:
    """
    A top level statement together with the source lines it spans.
    """

    expr: Expr
    first_line: int
    last_line: int


def operator_call(op: str, *operands: Expr, line: int = 0, col: int = 0):
    """
    Build the call node an operator desugars to.

    :param op: The operator symbol.
    :param operands: One (unary) or two (binary) operands.
    :param line: Source line.
    :param col: Source column.
    :return: The call node.
    """
    return Call(
        Ident(op, line, col),
        tuple(Arg(None, operand) for operand in operands),
        line,
        col,
    )


def is_operator_call(expr: Expr) -> bool:
    """
    Check whether a node is a desugared operator with positional operands.

    :param expr: The node.
    :return: True for unary minus and binary operator calls.
    """
    if not isinstance(expr, Call) or not isinstance(expr.fn, Ident):
        return False
    if expr.fn.name not in OPERATORS:
        return False
    if any(arg.name is not None for arg in expr.args):
        return False
    if len(expr.args) == 2:
        return True
    return len(expr.args) == 1 and expr.fn.name == "-"
