"""
Recursive descent parser of the embedded language.

Precedence from loosest to tightest: comparison, addition,
multiplication, power, unary minus, postfix call, atom. Power is right
associative, all other binary operators are left associative.
"""

from typing import List, Optional

from src.errors import LangError
from src.lang.ast import (
    Arg,
    Assign,
    Call,
    Expr,
    FunctionDef,
    Ident,
    Literal,
    Param,
    Statement,
    operator_call,
)
from src.lang.lexer import Token, tokenize

COMPARISON = ("<", ">", "<=", ">=", "==", "!=")
ADDITION = ("+", "-")
MULTIPLICATION = ("*", "/")
CONSTANTS = {
    "TRUE": ("logical", True),
    "FALSE": ("logical", False),
    "NA": ("na", None),
    "NaN": ("nan", None),
    "Inf": ("inf", None),
    "NULL": ("null", None),
}


class Parser:
    """
    Parser over the token list of one source text
    """

    def __init__(self, text: str) -> None:
        """
        Tokenize the source text.

        :param text: The source code.
        """
        self.tokens = tokenize(text)
        self.position = 0
        self.depth = 0

    def peek(self) -> Token:
        """
        Return the next token. Inside parentheses newlines are skipped.

        :return: The next significant token.
        """
        if self.depth > 0:
            self.skip_newlines()
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != "eof":
            self.position += 1
        return token

    def skip_newlines(self) -> None:
        while self.tokens[self.position].kind == "newline":
            self.position += 1

    def at(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "op" and token.text == text

    def expect(self, text: str) -> Token:
        token = self.peek()
        if not (token.kind == "op" and token.text == text):
            self.fail(token, f"expected '{text}'")
        return self.advance()

    @staticmethod
    def fail(token: Token, message: str) -> None:
        """
        Raise a parse error at a token.

        :param token: The offending token.
        :param message: What was expected.
        :raise LangError: Always.
        """
        found = "end of input" if token.kind == "eof" else f"'{token.text}'"
        if token.kind == "newline":
            found = "end of line"
        raise LangError(
            "parse", f"{message}, found {found}", (token.line, token.col)
        )

    def parse_program(self) -> List[Statement]:
        """
        Parse all top level statements.

        :return: The statements with their line spans.
        """
        statements = []
        while True:
            while self.peek().kind == "newline" or self.at(";"):
                self.advance()
            token = self.peek()
            if token.kind == "eof":
                return statements
            expr = self.parse_statement()
            last_line = self.tokens[self.position - 1].line
            statements.append(Statement(expr, token.line, last_line))
            end = self.peek()
            if end.kind not in ("newline", "eof") and not self.at(";"):
                self.fail(end, "unexpected token")

    def parse_statement(self) -> Expr:
        token = self.peek()
        after = self.tokens[self.position + 1]
        if token.kind == "ident" and after.kind == "op" and after.text == "<-":
            self.advance()
            self.advance()
            self.skip_newlines()
            value = self.parse_expression()
            return Assign(token.text, value, token.line, token.col)
        return self.parse_expression()

    def parse_expression(self) -> Expr:
        expr = self.parse_comparison()
        if self.at("<-"):
            self.fail(self.peek(), "assignment is only allowed at top level")
        return expr

    def _binary(self, operators, operand) -> Expr:
        left = operand()
        while self.peek().kind == "op" and self.peek().text in operators:
            token = self.advance()
            self.skip_newlines()
            right = operand()
            left = operator_call(
                token.text, left, right, line=token.line, col=token.col
            )
        return left

    def parse_comparison(self) -> Expr:
        return self._binary(COMPARISON, self.parse_addition)

    def parse_addition(self) -> Expr:
        return self._binary(ADDITION, self.parse_multiplication)

    def parse_multiplication(self) -> Expr:
        return self._binary(MULTIPLICATION, self.parse_power)

    def parse_power(self) -> Expr:
        base = self.parse_unary()
        if self.at("^"):
            token = self.advance()
            self.skip_newlines()
            exponent = self.parse_power()
            return operator_call(
                "^", base, exponent, line=token.line, col=token.col
            )
        return base

    def parse_unary(self) -> Expr:
        if self.at("-"):
            token = self.advance()
            operand = self.parse_unary()
            return operator_call(
                "-", operand, line=token.line, col=token.col
            )
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_atom()
        while self.at("("):
            token = self.advance()
            self.depth += 1
            args = self.parse_arguments()
            self.expect(")")
            self.depth -= 1
            expr = Call(expr, args, token.line, token.col)
        return expr

    def parse_arguments(self) -> tuple:
        args = []
        names = set()
        if self.at(")"):
            return ()
        while True:
            token = self.peek()
            after = self.tokens[self.position + 1]
            name: Optional[str] = None
            if (
                token.kind in ("ident", "string")
                and after.kind == "op"
                and after.text == "="
            ):
                name = token.value
                if name in names:
                    self.fail(token, f'duplicate argument name "{name}"')
                names.add(name)
                self.advance()
                self.advance()
            args.append(Arg(name, self.parse_expression()))
            if self.at(","):
                self.advance()
                continue
            return tuple(args)

    def parse_parameters(self) -> tuple:
        params = []
        if self.at(")"):
            return ()
        while True:
            token = self.advance()
            if token.kind != "ident":
                self.fail(token, "expected parameter name")
            if any(param.name == token.text for param in params):
                self.fail(token, f'duplicate parameter "{token.text}"')
            default = None
            if self.at("="):
                self.advance()
                default = self.parse_expression()
            params.append(Param(token.text, default))
            if self.at(","):
                self.advance()
                continue
            return tuple(params)

    def parse_atom(self) -> Expr:
        token = self.advance()
        if token.kind == "number":
            return Literal("number", token.value, token.line, token.col)
        if token.kind == "string":
            return Literal("string", token.value, token.line, token.col)
        if token.kind == "ident":
            return Ident(token.text, token.line, token.col)
        if token.kind == "keyword" and token.text in CONSTANTS:
            kind, value = CONSTANTS[token.text]
            return Literal(kind, value, token.line, token.col)
        if token.kind == "keyword" and token.text == "function":
            self.expect("(")
            self.depth += 1
            params = self.parse_parameters()
            self.expect(")")
            self.depth -= 1
            self.skip_newlines()
            body = self.parse_expression()
            return FunctionDef(params, body, token.line, token.col)
        if token.kind == "op" and token.text == "(":
            self.depth += 1
            expr = self.parse_expression()
            self.expect(")")
            self.depth -= 1
            return expr
        self.fail(token, "unexpected token")


def parse_program(text: str) -> List[Statement]:
    """
    Parse source code into top level statements with line spans.

    :param text: The source code.
    :raise LangError: A parse error with line and column.
    :return: The statements.
    """
    try:
        return Parser(text).parse_program()
    except RecursionError:
        raise LangError("parse", "expression is nested too deeply")


def parse(text: str) -> List[Expr]:
    """
    Parse source code into one expression per top level statement.

    :param text: The source code.
    :raise LangError: A parse error with line and column.
    :return: The expressions.
    """
    return [statement.expr for statement in parse_program(text)]


def parse_single(text: str) -> Expr:
    """
    Parse exactly one expression, as used for code arguments.

    :param text: The source code.
    :raise LangError: If the text is not exactly one expression.
    :return: The expression.
    """
    statements = parse(text)
    if len(statements) != 1:
        raise LangError(
            "parse", f"expected one expression, found {len(statements)}"
        )
    if isinstance(statements[0], Assign):
        raise LangError("parse", "assignment is not allowed here")
    return statements[0]
