"""
Tree walking evaluator.

Arguments are evaluated eagerly from left to right. Names resolve in the
local frame, then in the namespace the function was defined in, then in
the builtins. Every call checks the deadline and every allocation is
charged to the budget before it happens.
"""

import math
from collections import ChainMap
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.errors import (
    EvaluatorCrash,
    GatewayError,
    LangError,
    ResourceError,
)
from src.formats.printing import print_value
from src.lang.ast import Assign, Call, Expr, FunctionDef, Ident, Literal
from src.lang.builtins import BUILTINS, DOTS, REQUIRED
from src.lang.context import EvalContext
from src.lang.parser import parse_program
from src.values.value import (
    NULL,
    Builtin,
    Closure,
    Function,
    Value,
    logical,
    number,
    string,
)

Arguments = Sequence[Tuple[Optional[str], Value]]
VALUE_NAME = ".val"


class TranscriptEntry:
    """
    One executed top level statement with the source lines it spans and
    the output it produced, used to rebuild the console.
    """

    def __init__(
        self,
        first_line: int,
        last_line: int,
        output: str,
        error: Optional[str] = None,
    ) -> None:
        self.first_line = first_line
        self.last_line = last_line
        self.output = output
        self.error = error

    def to_dict(self) -> Dict:
        return {
            "first_line": self.first_line,
            "last_line": self.last_line,
            "output": self.output,
            "error": self.error,
        }


def _literal(expr: Literal) -> Value:
    if expr.kind == "number":
        return number(expr.value)
    if expr.kind == "string":
        return string(expr.value)
    if expr.kind == "logical":
        return logical(expr.value)
    if expr.kind == "na":
        return logical(None)
    if expr.kind == "nan":
        return number(math.nan)
    if expr.kind == "inf":
        return number(math.inf)
    return NULL


def lookup(name: str, env: Mapping[str, Value]) -> Value:
    """
    Resolve a name in an environment, falling back to the builtins.

    :param name: The name.
    :param env: The environment.
    :raise KeyError: If the name is unbound.
    :return: The value.
    """
    if name in env:
        return env[name]
    if name in BUILTINS:
        return Builtin(name)
    raise KeyError(name)


def eval_expr(expr: Expr, ctx: EvalContext, env: Mapping = None) -> Value:
    """
    Evaluate an expression.

    :param expr: The expression.
    :param ctx: The evaluation context.
    :param env: The environment, the context namespace by default.
    :raise LangError: On evaluation errors or exhausted budgets.
    :return: The value. ctx.visible tells whether it would be echoed.
    """
    env = ctx.namespace if env is None else env
    if isinstance(expr, Literal):
        ctx.visible = True
        return _literal(expr)
    if isinstance(expr, Ident):
        ctx.visible = True
        try:
            return lookup(expr.name, env)
        except KeyError:
            raise LangError(
                "eval",
                f"object '{expr.name}' not found",
                (expr.line, expr.col) if expr.line else None,
            )
    if isinstance(expr, FunctionDef):
        ctx.visible = True
        return Closure(expr.params, expr.body, env)
    if isinstance(expr, Call):
        function = eval_expr(expr.fn, ctx, env)
        name = expr.fn.name if isinstance(expr.fn, Ident) else "value"
        if not isinstance(function, Function) and name in BUILTINS:
            function = Builtin(name)
        if not isinstance(function, Function):
            raise LangError(
                "eval",
                f"attempt to apply non-function '{name}'",
                (expr.line, expr.col) if expr.line else None,
            )
        args = [
            (arg.name, eval_expr(arg.value, ctx, env)) for arg in expr.args
        ]
        return call_function(function, args, ctx)
    if isinstance(expr, Assign):
        raise LangError("eval", "assignment is only allowed at top level")
    raise EvaluatorCrash(f"unknown syntax node {type(expr).__name__}")


def match_arguments(
    formals: Sequence[str], args: Arguments, function: str
) -> Tuple[Dict[str, Value], List[Tuple[Optional[str], Value]]]:
    """
    Match call arguments to formal parameters: exact names first, then
    positional arguments fill the remaining formals before "...", in
    order. Everything else goes to "..." if the function has it.

    :param formals: Formal parameter names, may contain "...".
    :param args: The (name, value) pairs of the call.
    :param function: Function name for error messages.
    :raise LangError: For unused arguments or duplicate matches.
    :return: Tuple (matched formals, dots arguments).
    """
    has_dots = DOTS in formals
    named = [name for name in formals if name != DOTS]
    bound: Dict[str, Value] = {}
    dots = []
    positional = []
    for name, value in args:
        if name is None:
            positional.append(value)
        elif name in named:
            if name in bound:
                raise LangError(
                    "eval",
                    f"formal argument \"{name}\" matched by multiple actual "
                    f"arguments in {function}()",
                )
            bound[name] = value
        elif has_dots:
            dots.append((name, value))
        else:
            raise LangError(
                "eval", f"unused argument ({name} = ...) in {function}()"
            )
    before_dots = (
        formals[: formals.index(DOTS)] if has_dots else list(formals)
    )
    open_formals = [name for name in before_dots if name not in bound]
    for index, value in enumerate(positional):
        if index < len(open_formals):
            bound[open_formals[index]] = value
        elif has_dots:
            dots.append((None, value))
        else:
            raise LangError(
                "eval", f"unused argument in {function}(): too many arguments"
            )
    return bound, dots


def call_builtin(name: str, args: Arguments, ctx: EvalContext) -> Value:
    """
    Call a builtin.

    :param name: The builtin name.
    :param args: The (name, value) pairs of the call.
    :param ctx: The evaluation context.
    :return: The result.
    """
    spec = BUILTINS[name]
    bound, dots = match_arguments(spec.formals, args, name)
    kwargs = {}
    for formal, default in spec.params:
        if formal == DOTS:
            kwargs["dots"] = dots
        elif formal in bound:
            kwargs[formal] = bound[formal]
        elif default is REQUIRED:
            raise LangError(
                "eval",
                f'argument "{formal}" is missing, with no default in '
                f"{name}()",
            )
        else:
            kwargs[formal] = default
    result = spec.function(ctx, **kwargs)
    ctx.visible = not spec.invisible
    return result


def call_closure(
    closure: Closure, args: Arguments, ctx: EvalContext
) -> Value:
    """
    Call a user defined function. Defaults are evaluated in the new frame
    in parameter order, so later defaults can refer to earlier parameters.

    :param closure: The function.
    :param args: The (name, value) pairs of the call.
    :param ctx: The evaluation context.
    :return: The result.
    """
    formals = [param.name for param in closure.params]
    bound, _ = match_arguments(formals, args, "function")
    frame: Dict[str, Value] = {}
    env = ChainMap(frame, closure.env)
    for param in closure.params:
        if param.name == DOTS:
            continue
        if param.name in bound:
            frame[param.name] = bound[param.name]
        elif param.default is not None:
            frame[param.name] = eval_expr(param.default, ctx, env)
        else:
            raise LangError(
                "eval", f'argument "{param.name}" is missing, with no default'
            )
    return eval_expr(closure.body, ctx, env)


def call_function(
    function: Union[Function, str], args: Arguments, ctx: EvalContext
) -> Value:
    """
    Call a function value or a builtin by name.

    :param function: A closure, a builtin or the name of a builtin.
    :param args: Ordered (name, value) pairs, name None for positional.
    :param ctx: The evaluation context.
    :raise LangError: For argument mismatches and evaluation errors.
    :return: The result.
    """
    if isinstance(function, str):
        if function not in BUILTINS:
            raise LangError("eval", f"could not find function '{function}'")
        function = Builtin(function)
    ctx.budget.charge(1)
    ctx.enter()
    try:
        if isinstance(function, Builtin):
            return call_builtin(function.name, args, ctx)
        if isinstance(function, Closure):
            return call_closure(function, args, ctx)
        raise LangError("eval", "attempt to apply non-function")
    finally:
        ctx.leave()


def as_gateway_error(error: BaseException) -> GatewayError:
    """
    Convert a failure during evaluation into a gateway error.

    :param error: The exception.
    :return: The error itself, or the resource error or evaluator crash it
        stands for.
    """
    if isinstance(error, GatewayError):
        return error
    if isinstance(error, RecursionError):
        return ResourceError("call depth", "expression nested too deeply")
    if isinstance(error, MemoryError):
        return ResourceError("memory", "memory exhausted")
    return EvaluatorCrash(f"{type(error).__name__}: {error}")


def evaluate(expr: Expr, ctx: EvalContext) -> Value:
    """
    Evaluate a single expression as an entry point: unexpected failures
    become evaluator crashes.

    :param expr: The expression.
    :param ctx: The evaluation context.
    :return: The value.
    """
    try:
        return eval_expr(expr, ctx)
    except GatewayError:
        raise
    except Exception as error:
        raise as_gateway_error(error) from error


def run_script(text: str, ctx: EvalContext) -> Dict[str, Value]:
    """
    Run a script. Statements are evaluated in order, assignments bind in
    the namespace, visible values of other statements are echoed to
    stdout. The value of a final non-assignment statement is bound to
    .val. The namespace only changes if the whole script succeeds.

    :param text: The source code.
    :param ctx: The evaluation context.
    :raise LangError: The first error; nothing is committed then.
    :return: The names bound by the script.
    """
    statements = parse_program(text)
    delta: Dict[str, Value] = {}
    env = ChainMap(delta, ctx.namespace)
    for index, statement in enumerate(statements):
        mark = len(ctx.stdout)
        entry = TranscriptEntry(statement.first_line, statement.last_line, "")
        ctx.transcript.append(entry)
        last = index == len(statements) - 1
        try:
            _run_statement(statement.expr, ctx, env, delta, last)
        except GatewayError as error:
            entry.error = str(error)
            raise
        except Exception as error:
            converted = as_gateway_error(error)
            entry.error = str(converted)
            raise converted from error
        finally:
            entry.output = "".join(ctx.stdout[mark:])
        if ctx.logger is not None:
            ctx.logger.log_event(
                {"statement": index + 1, "cells_used": ctx.budget.cells_used}
            )
    ctx.namespace.update(delta)
    return delta


def _run_statement(expr, ctx, env, delta, last) -> None:
    ctx.budget.check()
    if isinstance(expr, Assign):
        delta[expr.name] = eval_expr(expr.value, ctx, env)
        return
    value = eval_expr(expr, ctx, env)
    if ctx.visible:
        ctx.write(print_value(value) + "\n")
    if last:
        delta[VALUE_NAME] = value
