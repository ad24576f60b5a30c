"""
JSON mapping of values.

Export: vectors (scalars included) become arrays, NA becomes null and the
non-finite numbers become the strings "NaN", "Inf" and "-Inf". Lists
become objects, data frames arrays of row objects. NULL is the empty
object.

Import is the inverse: an array of objects is a data frame, an array of
equally long number arrays a data frame with columns V1, V2, ..., other
arrays are vectors, objects are lists. A number array re-imports the
non-finite strings as numbers.
"""

import json
import math
from typing import Any, Dict, List, Optional

from src.errors import FormatError
from src.values.graphics import GraphicsRecording
from src.values.value import (
    NULL,
    DataFrame,
    Function,
    ListValue,
    Null,
    Value,
    Vector,
    logical,
    number,
    string,
)

NON_FINITE = {"NaN": math.nan, "Inf": math.inf, "-Inf": -math.inf}
KIND_RANK = {"logical": 0, "number": 1, "string": 2}


def _number_data(value: float) -> Any:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    if value.is_integer() and abs(value) < 1e15:
        return int(value)
    return value


def _element_data(vector: Vector, index: int) -> Any:
    item = vector.element(index)
    if item is None or vector.kind != "number":
        return item
    return _number_data(item)


def to_json_data(value: Value) -> Any:
    """
    Convert a value into json compatible python data.

    :param value: The value.
    :raise FormatError: For functions.
    :return: Python data for json.dumps.
    """
    if isinstance(value, Null):
        return {}
    if isinstance(value, Vector):
        return [_element_data(value, i) for i in range(len(value))]
    if isinstance(value, ListValue):
        return {name: to_json_data(item) for name, item in value.items}
    if isinstance(value, DataFrame):
        return [
            {
                name: _element_data(column, row)
                for name, column in value.columns
            }
            for row in range(value.nrow)
        ]
    if isinstance(value, GraphicsRecording):
        return value.to_dict()
    if isinstance(value, Function):
        raise FormatError("functions cannot be exported as json")
    raise FormatError(f"cannot export {type(value).__name__} as json")


def dump_json(data: Any, pretty: bool = False) -> bytes:
    """
    Serialize json data deterministically.

    :param data: Python data.
    :param pretty: Indent nested structures by two spaces.
    :return: UTF-8 bytes.
    """
    if pretty:
        text = json.dumps(data, indent=2, ensure_ascii=False)
    else:
        text = json.dumps(data, separators=(",", ":"), ensure_ascii=False)
    return text.encode("utf-8")


def export_json(value: Value, pretty: bool = False) -> bytes:
    return dump_json(to_json_data(value), pretty)


def _scalar_kind(item: Any) -> Optional[str]:
    if item is None:
        return None
    if isinstance(item, bool):
        return "logical"
    if isinstance(item, (int, float)):
        return "number"
    if isinstance(item, str):
        return "string"
    raise FormatError(f"unsupported json element {item!r}")


def _vector_from_items(items: List[Any]) -> Vector:
    """
    Build a vector from json scalars. Mixed kinds are widened along
    logical < number < string; non-finite strings count as numbers when
    the array holds at least one real number.

    :param items: The json scalars, None for null.
    :return: The vector.
    """
    kinds = {_scalar_kind(item) for item in items} - {None}
    if not kinds:
        return Vector.from_list("logical", [None] * len(items))
    if kinds == {"number", "string"} and all(
        item in NON_FINITE
        for item in items
        if isinstance(item, str)
    ):
        kinds = {"number"}
    kind = max(kinds, key=KIND_RANK.get)
    converted = []
    for item in items:
        if item is None:
            converted.append(None)
        elif kind == "number":
            converted.append(
                NON_FINITE[item] if isinstance(item, str) else float(item)
            )
        elif kind == "string" and not isinstance(item, str):
            converted.append(_string_of(item))
        else:
            converted.append(item)
    return Vector.from_list(kind, converted)


def _string_of(item: Any) -> str:
    if isinstance(item, bool):
        return "TRUE" if item else "FALSE"
    return json.dumps(item)


def _is_scalar(item: Any) -> bool:
    return not isinstance(item, (list, dict))


def _frame_from_rows(rows: List[Dict[str, Any]]) -> DataFrame:
    names: List[str] = []
    for row in rows:
        for name in row.keys():
            if name not in names:
                names.append(name)
    columns = []
    for name in names:
        cells = [row.get(name) for row in rows]
        if not all(_is_scalar(cell) for cell in cells):
            raise FormatError(f'column "{name}" holds nested data')
        columns.append((name, _vector_from_items(cells)))
    return DataFrame(columns)


def _frame_from_matrix(rows: List[List[Any]]) -> DataFrame:
    width = len(rows[0])
    return DataFrame(
        (f"V{j + 1}", _vector_from_items([row[j] for row in rows]))
        for j in range(width)
    )


def _is_number_cell(cell: Any) -> bool:
    if isinstance(cell, str):
        return cell in NON_FINITE
    if isinstance(cell, bool):
        return False
    return cell is None or isinstance(cell, (int, float))


def _is_matrix(items: List[Any]) -> bool:
    if not items or not all(isinstance(item, list) for item in items):
        return False
    width = len(items[0])
    return width > 0 and all(
        len(row) == width and all(_is_number_cell(cell) for cell in row)
        for row in items
    )


def from_json_data(data: Any) -> Value:
    """
    Convert parsed json into a value.

    :param data: Data as returned by json.loads.
    :raise FormatError: If the data cannot be represented.
    :return: The value.
    """
    try:
        if data is None:
            return logical(None)
        if isinstance(data, bool):
            return logical(data)
        if isinstance(data, (int, float)):
            return number(float(data))
        if isinstance(data, str):
            return string(data)
        if isinstance(data, dict):
            if not data:
                return NULL
            return ListValue(
                (name, from_json_data(item)) for name, item in data.items()
            )
        if all(_is_scalar(item) for item in data):
            return _vector_from_items(data)
        if all(isinstance(item, dict) for item in data):
            return _frame_from_rows(data)
        if _is_matrix(data):
            return _frame_from_matrix(data)
        return ListValue(
            (str(index + 1), from_json_data(item))
            for index, item in enumerate(data)
        )
    except ValueError as error:
        raise FormatError(f"invalid json structure: {error}")


def import_json(raw: bytes) -> Value:
    """
    Parse a json document into a value.

    :param raw: UTF-8 encoded json.
    :raise FormatError: If the document is not valid json.
    :return: The value.
    """
    return from_json_data(load_json(raw))


def load_json(raw: bytes) -> Any:
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as error:
        raise FormatError(f"invalid json: {error}")
