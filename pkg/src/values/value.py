"""
This file defines the tagged value model of the embedded language.

Atomic data lives in numpy arrays. Missing values (NA) are carried by a
separate boolean mask so logical, number and string vectors can all be
missing, and a missing number is never confused with NaN.
"""

from enum import Enum
from types import MappingProxyType
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np


class Tag(str, Enum):
    """
    The tags of the value model
    """

    NULL = "null"
    LOGICAL = "logical"
    NUMBER = "number"
    STRING = "string"
    VECTOR = "vector"
    LIST = "list"
    DATAFRAME = "dataframe"
    FUNCTION = "function"
    GRAPHIC = "graphic"


ATOMIC_KINDS = ("logical", "number", "string")
_DTYPES = {"logical": bool, "number": np.float64, "string": object}
_FILL = {"logical": False, "number": 0.0, "string": ""}


class Value:
    """
    Base class for all values. Values are immutable after construction and
    can be shared between concurrently running evaluations.
    """

    tag: Tag = None

    def cells(self) -> int:
        """
        Number of value cells this value occupies in an evaluation budget.

        :return: Cell count.
        """
        return 1


class Null(Value):
    """
    The NULL value. Use the module level NULL instance.
    """

    tag = Tag.NULL

    def __repr__(self) -> str:
        return "NULL"


NULL = Null()


class Vector(Value):
    """
    Atomic vector of logical, number or string elements. A scalar is a
    length one vector flagged as scalar; its tag is the element kind.
    """

    def __init__(
        self,
        kind: str,
        data: Any,
        na: Optional[Any] = None,
        scalar: bool = False,
    ) -> None:
        """
        Create a vector.

        :param kind: Element kind, one of logical, number or string.
        :param data: Element data, anything numpy accepts as 1-d array.
        :param na: Boolean missing mask, defaults to no missing elements.
        :param scalar: Whether the vector is a scalar (length must be 1).
        :raise ValueError: If the kind is unknown or the shapes mismatch.
        """
        if kind not in ATOMIC_KINDS:
            raise ValueError(f'Vector kind "{kind}" does not exist!')
        if kind == "string":
            data = list(data) if not isinstance(data, np.ndarray) else data
            array = np.empty(len(data), dtype=object)
            array[:] = [str(item) for item in data]
        else:
            array = np.array(data, dtype=_DTYPES[kind]).reshape(-1)
        if na is None:
            mask = np.zeros(array.shape[0], dtype=bool)
        else:
            mask = np.array(na, dtype=bool).reshape(-1)
        if mask.shape[0] != array.shape[0]:
            raise ValueError("Vector data and NA mask differ in length!")
        if scalar and array.shape[0] != 1:
            raise ValueError("A scalar must have exactly one element!")
        if mask.any():
            array = array.copy()
            array[mask] = _FILL[kind]
        array.flags.writeable = False
        mask.flags.writeable = False
        self.kind = kind
        self.data = array
        self.na = mask
        self.scalar = scalar

    @property
    def tag(self) -> Tag:
        return Tag(self.kind) if self.scalar else Tag.VECTOR

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def cells(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        prefix = "scalar" if self.scalar else "vector"
        return f"<{prefix} {self.kind} {self.to_list()}>"

    @classmethod
    def from_list(
        cls, kind: str, items: Sequence[Any], scalar: bool = False
    ) -> "Vector":
        """
        Build a vector from python values, None marks a missing element.

        :param kind: Element kind.
        :param items: The elements.
        :param scalar: Whether to build a scalar.
        :return: The vector.
        """
        mask = [item is None for item in items]
        data = [_FILL[kind] if item is None else item for item in items]
        return cls(kind, data, mask, scalar)

    def element(self, index: int) -> Any:
        """
        Get one element as python value, None for NA.

        :param index: Zero based element index.
        :return: The element.
        """
        if self.na[index]:
            return None
        item = self.data[index]
        if self.kind == "number":
            return float(item)
        if self.kind == "logical":
            return bool(item)
        return str(item)

    def to_list(self) -> List[Any]:
        """
        Convert the vector into a python list, None marks NA.

        :return: List of elements.
        """
        return [self.element(index) for index in range(len(self))]

    def as_vector(self) -> "Vector":
        """
        Drop the scalar flag.

        :return: The same data as non-scalar vector.
        """
        if not self.scalar:
            return self
        return Vector(self.kind, self.data, self.na)


def number(value: Optional[float]) -> Vector:
    """
    Create a number scalar, None creates NA.

    :param value: The number.
    :return: The scalar.
    """
    return Vector.from_list("number", [value], scalar=True)


def logical(value: Optional[bool]) -> Vector:
    """
    Create a logical scalar, None creates NA.

    :param value: The logical.
    :return: The scalar.
    """
    return Vector.from_list("logical", [value], scalar=True)


def string(value: Optional[str]) -> Vector:
    """
    Create a string scalar, None creates NA.

    :param value: The string.
    :return: The scalar.
    """
    return Vector.from_list("string", [value], scalar=True)


def numbers(values: Iterable[Optional[float]]) -> Vector:
    """
    Create a number vector, None elements are NA.

    :param values: The numbers.
    :return: The vector.
    """
    return Vector.from_list("number", list(values))


def strings(values: Iterable[Optional[str]]) -> Vector:
    """
    Create a string vector, None elements are NA.

    :param values: The strings.
    :return: The vector.
    """
    return Vector.from_list("string", list(values))


def logicals(values: Iterable[Optional[bool]]) -> Vector:
    """
    Create a logical vector, None elements are NA.

    :param values: The logicals.
    :return: The vector.
    """
    return Vector.from_list("logical", list(values))


def _check_names(names: Sequence[str], what: str) -> None:
    """
    Check that names are unique and non-empty.

    :param names: The names to check.
    :param what: Description used in the error message.
    :raise ValueError: If a name is empty or duplicated.
    """
    if any(not name for name in names):
        raise ValueError(f"{what} names must be non-empty!")
    if len(set(names)) != len(names):
        raise ValueError(f"{what} names must be unique!")


class ListValue(Value):
    """
    Ordered list of named values.
    """

    tag = Tag.LIST

    def __init__(self, items: Iterable[Tuple[str, Value]]) -> None:
        """
        Create a list.

        :param items: Ordered (name, value) pairs.
        :raise ValueError: If names are empty or duplicated.
        """
        items = tuple(items)
        _check_names([name for name, _ in items], "List")
        self.items = items
        self._index = {name: value for name, value in items}

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.items]

    def get(self, name: str) -> Value:
        return self._index[name]

    def __len__(self) -> int:
        return len(self.items)

    def cells(self) -> int:
        return 1 + sum(value.cells() for _, value in self.items)


class DataFrame(Value):
    """
    Ordered collection of equally long, named column vectors.
    """

    tag = Tag.DATAFRAME

    def __init__(self, columns: Iterable[Tuple[str, Vector]]) -> None:
        """
        Create a data frame.

        :param columns: Ordered (name, vector) pairs.
        :raise ValueError: If names are invalid or the lengths differ.
        """
        columns = tuple(
            (name, column.as_vector()) for name, column in columns
        )
        _check_names([name for name, _ in columns], "Column")
        for name, column in columns:
            if not isinstance(column, Vector):
                raise ValueError(f'Column "{name}" is not a vector!')
        if len({len(column) for _, column in columns}) > 1:
            raise ValueError("All data frame columns must have equal length!")
        self.columns = columns
        self._index = {name: column for name, column in columns}

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.columns]

    def column(self, name: str) -> Vector:
        return self._index[name]

    @property
    def nrow(self) -> int:
        return len(self.columns[0][1]) if self.columns else 0

    @property
    def ncol(self) -> int:
        return len(self.columns)

    def cells(self) -> int:
        return 1 + sum(len(column) for _, column in self.columns)


class Function(Value):
    """
    Base class of callable values.
    """

    tag = Tag.FUNCTION


class Closure(Function):
    """
    A user defined function: parameters, body and the namespace it was
    defined in.
    """

    def __init__(self, params: tuple, body: Any, env: Mapping) -> None:
        """
        Create a closure.

        :param params: Tuple of parameter nodes (name and optional default).
        :param body: Body expression.
        :param env: The defining namespace.
        """
        self.params = tuple(params)
        self.body = body
        self.env = env


class Builtin(Function):
    """
    A function implemented by the interpreter itself.
    """

    def __init__(self, name: str) -> None:
        """
        Create a reference to a builtin.

        :param name: Name of the builtin in the builtin registry.
        """
        self.name = name

    def __repr__(self) -> str:
        return f"<builtin {self.name}>"


def freeze(namespace: Mapping[str, Value]) -> Mapping[str, Value]:
    """
    Return a read-only view of a namespace dictionary.

    :param namespace: The namespace.
    :return: Read-only mapping.
    """
    return MappingProxyType(dict(namespace))
