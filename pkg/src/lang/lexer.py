""" Tokenizer of the embedded language. """

import re
from typing import List, NamedTuple

from src.errors import LangError

KEYWORDS = ("TRUE", "FALSE", "NA", "NaN", "Inf", "NULL", "function")
SYMBOLS = (
    "<-",
    "<=",
    ">=",
    "==",
    "!=",
    "+",
    "-",
    "*",
    "/",
    "^",
    "<",
    ">",
    "=",
    "(",
    ")",
    ",",
    ";",
)
NUMBER = re.compile(r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
IDENTIFIER = re.compile(r"[A-Za-z.][A-Za-z0-9._]*")
ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "0": "\0"}


class Token(NamedTuple):
    """
    One token. kind is number, string, ident, keyword, op, newline or eof.
    """

    kind: str
    text: str
    value: object
    line: int
    col: int


def _read_string(text: str, start: int, line: int, col: int):
    """
    Read a double quoted string starting at text[start] == '"'.

    :return: Tuple (value, end index).
    """
    chars = []
    index = start + 1
    while index < len(text):
        char = text[index]
        if char == '"':
            return "".join(chars), index + 1
        if char == "\n":
            break
        if char == "\\":
            if index + 1 >= len(text):
                break
            code = text[index + 1]
            if code in ESCAPES:
                chars.append(ESCAPES[code])
                index += 2
                continue
            if code == "u" and re.match(r"[0-9a-fA-F]{4}", text[index + 2 :]):
                chars.append(chr(int(text[index + 2 : index + 6], 16)))
                index += 6
                continue
            raise LangError("parse", f"invalid escape \\{code}", (line, col))
        chars.append(char)
        index += 1
    raise LangError("parse", "unterminated string", (line, col))


def tokenize(text: str) -> List[Token]:
    """
    Split source code into tokens. Comments run from # to the end of the
    line. Newlines are kept as tokens because they separate statements.

    :param text: The source code.
    :raise LangError: On characters that do not start a token.
    :return: The tokens, terminated by an eof token.
    """
    tokens = []
    index = 0
    line = 1
    line_start = 0
    while index < len(text):
        char = text[index]
        col = index - line_start + 1
        if char == "\n":
            tokens.append(Token("newline", "\n", None, line, col))
            index += 1
            line += 1
            line_start = index
            continue
        if char in " \t\r\f":
            index += 1
            continue
        if char == "#":
            while index < len(text) and text[index] != "\n":
                index += 1
            continue
        if char == '"':
            value, end = _read_string(text, index, line, col)
            tokens.append(Token("string", text[index:end], value, line, col))
            index = end
            continue
        match = NUMBER.match(text, index)
        if match:
            literal = match.group(0)
            tokens.append(Token("number", literal, float(literal), line, col))
            index = match.end()
            continue
        match = IDENTIFIER.match(text, index)
        if match:
            word = match.group(0)
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, word, line, col))
            index = match.end()
            continue
        for symbol in SYMBOLS:
            if text.startswith(symbol, index):
                tokens.append(Token("op", symbol, symbol, line, col))
                index += len(symbol)
                break
        else:
            raise LangError("parse", f"unexpected input '{char}'", (line, col))
    col = index - line_start + 1
    tokens.append(Token("eof", "", None, line, col))
    return tokens
