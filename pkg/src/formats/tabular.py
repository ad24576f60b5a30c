"""
Delimited text tables (csv and tab) read and written with pandas.

Empty fields and the text NA are missing. NA cells and empty strings are
both written as empty fields. Numbers are written with the shortest text
that reads back as the same double. On import each column gets the
narrowest kind that fits all of its non-missing cells: logical
(TRUE/FALSE), number (including NaN, Inf and -Inf), otherwise string.
Quoting does not change the kind of a cell, so a column without any
present cell imports as logical.
"""

import csv
import io
import math
import re
from typing import List, Optional

import pandas as pd

from src.errors import FormatError
from src.formats.printing import format_number
from src.values.value import DataFrame, Vector

NUMBER = re.compile(r"^[+-]?((\d+\.?\d*|\.\d+)([eE][+-]?\d+)?|Inf|NaN)$")
LOGICALS = {"TRUE": True, "FALSE": False}
MISSING = ("", "NA")


def _infer_column(cells: List[str], dec: str) -> Vector:
    """
    Convert the raw cells of one column into a vector.

    :param cells: The raw cell texts.
    :param dec: The decimal separator.
    :return: The column vector.
    """
    present = [cell for cell in cells if cell not in MISSING]
    if all(cell in LOGICALS for cell in present):
        return Vector.from_list(
            "logical", [LOGICALS.get(cell) for cell in cells]
        )
    if dec != ".":
        present = [cell.replace(dec, ".") for cell in present]
    if all(NUMBER.match(cell) for cell in present):
        return Vector.from_list(
            "number",
            [
                None if cell in MISSING else _to_float(cell, dec)
                for cell in cells
            ],
        )
    return Vector.from_list(
        "string", [None if cell in MISSING else cell for cell in cells]
    )


def _to_float(cell: str, dec: str) -> float:
    return float(cell.replace(dec, ".").replace("Inf", "inf"))


def parse_table(raw: bytes, sep: str = ",", dec: str = ".") -> DataFrame:
    """
    Parse a delimited table with a header line.

    :param raw: The file content, UTF-8.
    :param sep: Field separator.
    :param dec: Decimal separator of numbers.
    :raise FormatError: If the bytes are not a well formed table.
    :return: The data frame.
    """
    try:
        frame = pd.read_csv(
            io.BytesIO(raw),
            sep=sep,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise FormatError("the table is empty")
    except (pd.errors.ParserError, UnicodeDecodeError) as error:
        raise FormatError(f"malformed table: {error}")
    frame = frame.fillna("")
    columns = []
    for name in frame.columns:
        cells = [str(cell) for cell in frame[name].tolist()]
        columns.append((str(name), _infer_column(cells, dec)))
    try:
        return DataFrame(columns)
    except ValueError as error:
        raise FormatError(f"malformed table: {error}")


def _number_text(value: float) -> str:
    if not math.isfinite(value):
        return format_number(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _export_cells(column: Vector, dec: str) -> List[Optional[str]]:
    cells = []
    for item in column.to_list():
        if item is None:
            cells.append("")
        elif column.kind == "logical":
            cells.append("TRUE" if item else "FALSE")
        elif column.kind == "number":
            cells.append(_number_text(item).replace(".", dec))
        else:
            cells.append(item)
    return cells


def export_table(
    frame: DataFrame, sep: str = ",", eol: str = "\n", dec: str = "."
) -> bytes:
    """
    Write a data frame as delimited text with a header line. Fields are
    quoted when they contain the separator, a quote or a line break.

    :param frame: The data frame.
    :param sep: Field separator.
    :param eol: Line terminator.
    :param dec: Decimal separator of numbers.
    :return: The UTF-8 encoded table.
    """
    table = pd.DataFrame(
        {name: _export_cells(column, dec) for name, column in frame.columns},
        columns=frame.names,
        dtype=object,
    )
    text = table.to_csv(
        sep=sep,
        lineterminator=eol,
        index=False,
        quoting=csv.QUOTE_MINIMAL,
    )
    return text.encode("utf-8")
