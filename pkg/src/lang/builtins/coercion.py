""" Argument checks and coercions shared by the builtins. """

import math
from typing import List, Optional, Sequence

import numpy as np

from src.errors import LangError
from src.formats.printing import format_number
from src.values.value import ATOMIC_KINDS, NULL, Null, Value, Vector

KIND_ORDER = {kind: rank for rank, kind in enumerate(ATOMIC_KINDS)}
EMPTY = {kind: Vector(kind, []) for kind in ATOMIC_KINDS}
TYPE_NAMES = {"logical": "logical", "number": "numeric", "string": "character"}


def type_name(value: Value) -> str:
    if isinstance(value, Vector):
        return TYPE_NAMES[value.kind]
    return value.tag.value


def coerce(vector: Vector, kind: str) -> Vector:
    """
    Coerce a vector upwards along logical < number < string.

    :param vector: The vector.
    :param kind: The target kind, not lower than the vector kind.
    :return: The coerced vector, NA stays NA.
    """
    if vector.kind == kind:
        return vector
    if kind == "number":
        data = vector.data.astype(np.float64)
        return Vector("number", data, vector.na, vector.scalar)
    if vector.kind == "logical":
        texts = ["TRUE" if item else "FALSE" for item in vector.data]
    else:
        texts = [format_number(float(item)) for item in vector.data]
    return Vector("string", texts, vector.na, vector.scalar)


def atomic(value: Value, what: str) -> Vector:
    """
    Require an atomic vector, NULL counts as empty logical vector.

    :param value: The argument value.
    :param what: Argument description for the error message.
    :raise LangError: For lists, data frames and functions.
    :return: The vector.
    """
    if isinstance(value, Null):
        return EMPTY["logical"]
    if not isinstance(value, Vector):
        raise LangError(
            "eval", f"{what} must be an atomic vector, not {type_name(value)}"
        )
    return value


def numeric(value: Value, what: str) -> Vector:
    """
    Require a logical or number vector and return it as number vector.

    :param value: The argument value.
    :param what: Argument description for the error message.
    :raise LangError: For strings and non-atomic values.
    :return: The number vector.
    """
    vector = atomic(value, what)
    if vector.kind == "string":
        raise LangError("eval", f"non-numeric argument: {what}")
    return coerce(vector, "number")


def scalar_number(
    value: Value, what: str, allow_na: bool = False
) -> Optional[float]:
    """
    Require a single number.

    :param value: The argument value.
    :param what: Argument name for the error message.
    :param allow_na: Whether NA is accepted (returned as None).
    :raise LangError: If the value is not a single number.
    :return: The number.
    """
    vector = numeric(value, f"'{what}'")
    if len(vector) != 1:
        raise LangError("eval", f"'{what}' must be a single number")
    item = vector.element(0)
    if item is None and not allow_na:
        raise LangError("eval", f"'{what}' must not be NA")
    return item


def count(value: Value, what: str) -> int:
    """
    Require a single non-negative whole number, e.g. a vector length.

    :param value: The argument value.
    :param what: Argument name for the error message.
    :raise LangError: For negative or non-finite values.
    :return: The count, fractions are truncated.
    """
    item = scalar_number(value, what)
    if not math.isfinite(item) or item < 0:
        raise LangError("eval", f"invalid '{what}' argument")
    return int(item)


def flag(value: Value, what: str) -> bool:
    """
    Require a single TRUE or FALSE.

    :param value: The argument value.
    :param what: Argument name for the error message.
    :raise LangError: For anything but a non-missing logical.
    :return: The flag.
    """
    vector = atomic(value, f"'{what}'")
    if vector.kind == "string" or len(vector) != 1 or vector.na[0]:
        raise LangError("eval", f"'{what}' must be TRUE or FALSE")
    return bool(vector.data[0])


def text(value: Value, what: str, allow_null: bool = False) -> Optional[str]:
    """
    Require a single string.

    :param value: The argument value.
    :param what: Argument name for the error message.
    :param allow_null: Whether NULL is accepted (returned as None).
    :raise LangError: If the value is not a single string.
    :return: The string.
    """
    if allow_null and value is NULL:
        return None
    if (
        not isinstance(value, Vector)
        or value.kind != "string"
        or len(value) != 1
        or value.na[0]
    ):
        raise LangError("eval", f"'{what}' must be a single string")
    return value.element(0)


def common_kind(vectors: Sequence[Vector]) -> str:
    if not vectors:
        return "logical"
    return max((vector.kind for vector in vectors), key=KIND_ORDER.get)


def concatenate(vectors: List[Vector], kind: str) -> Vector:
    """
    Concatenate vectors after coercing them to one kind.

    :param vectors: The vectors.
    :param kind: The common kind.
    :return: Non-scalar vector.
    """
    if not vectors:
        return EMPTY[kind]
    coerced = [coerce(vector, kind) for vector in vectors]
    data = np.concatenate([vector.data for vector in coerced])
    na = np.concatenate([vector.na for vector in coerced])
    return Vector(kind, data, na)


def present(vector: Vector) -> np.ndarray:
    """
    Mask of elements that are neither NA nor NaN.

    :param vector: The vector.
    :return: Boolean array.
    """
    mask = ~vector.na
    if vector.kind == "number":
        mask &= ~np.isnan(vector.data)
    return mask
