"""
R-style text rendering of values.

Numbers are shown with up to 7 significant digits. All elements of a
vector share the number of decimals; scientific notation is used when it
is narrower than the fixed notation. Vectors wrap at 80 columns and every
line starts with the bracketed index of its first element.
"""

import math
from typing import List

import numpy as np

from src.lang.ast import FunctionDef
from src.lang.deparse import deparse, deparse_value, quote
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

LINE_WIDTH = 80
DEFAULT_DIGITS = 7
EMPTY_NAMES = {
    "logical": "logical(0)",
    "number": "numeric(0)",
    "string": "character(0)",
}


def format_number(value: float) -> str:
    """
    Convert a number to a string with 15 significant digits.

    :param value: The number.
    :return: The string, "NaN", "Inf" or "-Inf" for non-finite numbers.
    """
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    text = f"{value:.15g}"
    return "0" if text == "-0" else text


def _significant(value: float, digits: int):
    """
    Significant digits and decimal exponent of a number rounded to the
    given number of digits.

    :return: Tuple (needed significant digits, exponent).
    """
    if value == 0:
        return 1, 0
    mantissa, exponent = f"{abs(value):.{digits - 1}e}".split("e")
    needed = len(mantissa.replace(".", "").rstrip("0")) or 1
    return needed, int(exponent)


def format_numbers(
    data: np.ndarray, na: np.ndarray, digits: int = DEFAULT_DIGITS
) -> List[str]:
    """
    Format numbers with a common layout.

    :param data: The numbers.
    :param na: The NA mask.
    :param digits: Maximum number of significant digits.
    :return: One unpadded string per element.
    """
    finite = [
        float(value)
        for value, missing in zip(data, na)
        if not missing and math.isfinite(value)
    ]
    scientific = False
    decimals = 0
    mantissa_digits = 1
    if finite:
        layouts = [_significant(value, digits) for value in finite]
        negative = any(value < 0 for value in finite)
        decimals = max(max(needed - 1 - exp, 0) for needed, exp in layouts)
        left = max(exp + 1 if exp >= 0 else 1 for _, exp in layouts)
        fixed_width = negative + left + (decimals + 1 if decimals else 0)
        mantissa_digits = max(needed for needed, _ in layouts)
        wide_exponent = any(abs(exp) >= 100 for _, exp in layouts)
        sci_width = (
            negative
            + mantissa_digits
            + (1 if mantissa_digits > 1 else 0)
            + (5 if wide_exponent else 4)
        )
        scientific = fixed_width > sci_width
    texts = []
    for value, missing in zip(data, na):
        value = float(value)
        if missing:
            texts.append("NA")
        elif math.isnan(value):
            texts.append("NaN")
        elif math.isinf(value):
            texts.append("Inf" if value > 0 else "-Inf")
        elif scientific:
            texts.append(f"{value:.{mantissa_digits - 1}e}")
        else:
            text = f"{value:.{decimals}f}"
            if float(text) == 0 and text.startswith("-"):
                text = text[1:]
            texts.append(text)
    return texts


def format_elements(
    vector: Vector, digits: int = DEFAULT_DIGITS, quoted: bool = True
) -> List[str]:
    """
    Format every element of an atomic vector.

    :param vector: The vector.
    :param digits: Significant digits for numbers.
    :param quoted: Whether strings are shown as quoted literals.
    :return: One unpadded string per element.
    """
    if vector.kind == "number":
        return format_numbers(vector.data, vector.na, digits)
    texts = []
    for index in range(len(vector)):
        item = vector.element(index)
        if item is None:
            unquoted = vector.kind == "string" and not quoted
            texts.append("<NA>" if unquoted else "NA")
        elif vector.kind == "logical":
            texts.append("TRUE" if item else "FALSE")
        else:
            texts.append(quote(item) if quoted else item)
    return texts


def print_vector(
    vector: Vector, digits: int = DEFAULT_DIGITS, quoted: bool = True
) -> str:
    """
    Render an atomic vector in index-labelled lines of at most 80 columns.

    :param vector: The vector.
    :param digits: Significant digits for numbers.
    :param quoted: Whether strings are shown as quoted literals.
    :return: The text without trailing newline.
    """
    if len(vector) == 0:
        return EMPTY_NAMES[vector.kind]
    texts = format_elements(vector, digits, quoted)
    width = max(len(text) for text in texts)
    left_aligned = vector.kind == "string"
    cells = [
        text.ljust(width) if left_aligned else text.rjust(width)
        for text in texts
    ]
    label_width = len(str(len(texts))) + 2
    per_line = max((LINE_WIDTH - label_width) // (width + 1), 1)
    lines = []
    for start in range(0, len(cells), per_line):
        label = f"[{start + 1}]".rjust(label_width)
        row = " ".join(cells[start : start + per_line])
        lines.append(f"{label} {row}".rstrip())
    return "\n".join(lines)


def _list_name(name: str) -> str:
    plain = name[0].isalpha() or name[0] == "."
    if plain and all(char.isalnum() or char in "._" for char in name):
        return name
    return f"`{name}`"


def print_list(value: ListValue, digits: int, prefix: str = "") -> str:
    """
    Render a list as one "$name" block per element.

    :param value: The list.
    :param digits: Significant digits for numbers.
    :param prefix: Accessor prefix of enclosing lists.
    :return: The text without trailing newline.
    """
    if len(value) == 0:
        return "list()" if not prefix else f"{prefix}\nlist()"
    blocks = []
    for name, item in value.items:
        accessor = f"{prefix}${_list_name(name)}"
        if isinstance(item, ListValue) and len(item):
            blocks.append(print_list(item, digits, accessor))
        else:
            blocks.append(f"{accessor}\n{print_value(item, digits)}\n")
    return "\n".join(blocks).rstrip("\n")


def print_data_frame(frame: DataFrame, digits: int) -> str:
    """
    Render a data frame as aligned columns with row numbers.

    :param frame: The data frame.
    :param digits: Significant digits for numbers.
    :return: The text without trailing newline.
    """
    if frame.ncol == 0:
        return f"data frame with 0 columns and {frame.nrow} rows"
    if frame.nrow == 0:
        header = print_vector(
            Vector("string", frame.names), digits, quoted=False
        )
        return f"{header}\n<0 rows> (or 0-length row.names)"
    row_names = [str(index + 1) for index in range(frame.nrow)]
    row_width = max(len(name) for name in row_names)
    columns = []
    for name, column in frame.columns:
        texts = format_elements(column, digits, quoted=False)
        width = max([len(name)] + [len(text) for text in texts])
        columns.append(
            [name.rjust(width)] + [text.rjust(width) for text in texts]
        )
    lines = [" " * row_width + "".join(" " + col[0] for col in columns)]
    for row, row_name in enumerate(row_names, start=1):
        cells = "".join(" " + col[row] for col in columns)
        lines.append(row_name.ljust(row_width) + cells)
    return "\n".join(lines)


def print_function(value: Value) -> str:
    if isinstance(value, Closure):
        return deparse(FunctionDef(value.params, value.body))
    from src.lang.builtins import BUILTINS

    spec = BUILTINS.get(value.name)
    params = []
    for name, default in spec.params if spec else ():
        if name == "..." or not isinstance(default, Value):
            params.append(name)
        else:
            params.append(f"{name} = {deparse_value(default)}")
    return f'function ({", ".join(params)}) .Primitive("{value.name}")'


def print_value(value: Value, digits: int = DEFAULT_DIGITS) -> str:
    """
    Render any value the way an R console prints it.

    :param value: The value.
    :param digits: Significant digits for numbers.
    :return: The text without trailing newline.
    """
    if isinstance(value, Null):
        return "NULL"
    if isinstance(value, Vector):
        return print_vector(value, digits)
    if isinstance(value, ListValue):
        return print_list(value, digits)
    if isinstance(value, DataFrame):
        return print_data_frame(value, digits)
    if isinstance(value, (Closure, Builtin)):
        return print_function(value)
    if isinstance(value, GraphicsRecording):
        return f"<graphics recording with {len(value.commands)} commands>"
    raise ValueError(f"Cannot print {value!r}!")
