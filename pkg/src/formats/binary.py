"""
The SGB1 binary value format.

A document is the magic b"SGB1" followed by exactly one encoded value.
Every value starts with a one byte tag. NULL is the bare tag, all other
tags are followed by the little-endian u32 length of their payload and the
payload itself:

    0x01-0x03  logical, number and string vector: flags (bit 0 scalar),
               u32 element count, one NA byte per element, then the
               elements (one byte, f64 or u32-length-prefixed UTF-8)
    0x04       list: u32 count, then (name, value) pairs
    0x05       data frame: u32 count, then (name, vector) pairs
    0x06       graphics recording as canonical json
    0x07       function source, only for the session store

Names and strings are u32-length-prefixed UTF-8. Unknown tags are errors.
"""

import json
import struct
from typing import Callable, Mapping, Optional

import numpy as np

from src.errors import FormatError, LangError
from src.lang.ast import FunctionDef
from src.lang.deparse import deparse
from src.lang.parser import parse_single
from src.values.graphics import GraphicsRecording
from src.values.value import (
    NULL,
    Builtin,
    Closure,
    DataFrame,
    Function,
    ListValue,
    Null,
    Value,
    Vector,
)

MAGIC = b"SGB1"
TAG_NULL = 0x00
TAG_VECTOR = {"logical": 0x01, "number": 0x02, "string": 0x03}
TAG_LIST = 0x04
TAG_DATAFRAME = 0x05
TAG_GRAPHIC = 0x06
TAG_FUNCTION = 0x07
KIND_OF_TAG = {tag: kind for kind, tag in TAG_VECTOR.items()}
U32 = struct.Struct("<I")


def _text(value: str) -> bytes:
    raw = value.encode("utf-8")
    return U32.pack(len(raw)) + raw


def _vector_payload(vector: Vector) -> bytes:
    parts = [
        bytes([1 if vector.scalar else 0]),
        U32.pack(len(vector)),
        vector.na.astype(np.uint8).tobytes(),
    ]
    if vector.kind == "logical":
        parts.append(vector.data.astype(np.uint8).tobytes())
    elif vector.kind == "number":
        parts.append(vector.data.astype("<f8").tobytes())
    else:
        parts.extend(_text(item) for item in vector.data)
    return b"".join(parts)


def _function_payload(value: Function) -> bytes:
    if isinstance(value, Builtin):
        return bytes([1]) + _text(value.name)
    source = deparse(FunctionDef(value.params, value.body))
    return bytes([0]) + _text(source)


def _encode(value: Value, allow_functions: bool) -> bytes:
    if isinstance(value, Null):
        return bytes([TAG_NULL])
    if isinstance(value, Vector):
        tag, payload = TAG_VECTOR[value.kind], _vector_payload(value)
    elif isinstance(value, ListValue):
        tag = TAG_LIST
        payload = U32.pack(len(value)) + b"".join(
            _text(name) + _encode(item, allow_functions)
            for name, item in value.items
        )
    elif isinstance(value, DataFrame):
        tag = TAG_DATAFRAME
        payload = U32.pack(value.ncol) + b"".join(
            _text(name) + _encode(column, allow_functions)
            for name, column in value.columns
        )
    elif isinstance(value, GraphicsRecording):
        tag = TAG_GRAPHIC
        payload = json.dumps(
            value.to_dict(), sort_keys=True, separators=(",", ":")
        ).encode("utf-8")
    elif isinstance(value, Function):
        if not allow_functions:
            raise FormatError("functions cannot be exported as bin")
        tag, payload = TAG_FUNCTION, _function_payload(value)
    else:
        raise FormatError(f"cannot encode {type(value).__name__}")
    return bytes([tag]) + U32.pack(len(payload)) + payload


def encode_bin(value: Value, allow_functions: bool = False) -> bytes:
    """
    Encode a value. The output is a pure function of the value.

    :param value: The value.
    :param allow_functions: Encode functions by their source. Only the
        session store does this, the public bin export never does.
    :raise FormatError: If the value is or contains a function.
    :return: The encoded bytes.
    """
    return MAGIC + _encode(value, allow_functions)


class _Reader:
    """
    Bounds checked cursor over the encoded bytes.
    """

    def __init__(self, raw: bytes, start: int = 0, end: int = None) -> None:
        self.raw = raw
        self.pos = start
        self.end = len(raw) if end is None else end

    def take(self, size: int) -> bytes:
        if size < 0 or self.pos + size > self.end:
            raise FormatError("corrupt bin data: unexpected end of data")
        chunk = self.raw[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def byte(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return U32.unpack(self.take(4))[0]

    def text(self) -> str:
        try:
            return self.take(self.u32()).decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError("corrupt bin data: invalid UTF-8")


FunctionLoader = Callable[[int, str], Value]


def _decode_vector(reader: _Reader, kind: str) -> Vector:
    scalar = reader.byte() == 1
    size = reader.u32()
    na = np.frombuffer(reader.take(size), dtype=np.uint8).astype(bool)
    if kind == "logical":
        data = np.frombuffer(reader.take(size), dtype=np.uint8) != 0
    elif kind == "number":
        data = np.frombuffer(reader.take(8 * size), dtype="<f8")
    else:
        data = [reader.text() for _ in range(size)]
    try:
        return Vector(kind, data, na, scalar)
    except ValueError as error:
        raise FormatError(f"corrupt bin data: {error}")


def _decode(reader: _Reader, load_function: Optional[FunctionLoader]):
    tag = reader.byte()
    if tag == TAG_NULL:
        return NULL
    known = tag in KIND_OF_TAG or TAG_LIST <= tag <= TAG_FUNCTION
    if not known:
        raise FormatError(f"corrupt bin data: unknown tag 0x{tag:02x}")
    size = reader.u32()
    body = _Reader(reader.raw, reader.pos, reader.pos + size)
    reader.take(size)
    if tag in KIND_OF_TAG:
        value = _decode_vector(body, KIND_OF_TAG[tag])
    elif tag in (TAG_LIST, TAG_DATAFRAME):
        count = body.u32()
        items = [
            (body.text(), _decode(body, load_function)) for _ in range(count)
        ]
        try:
            value = (ListValue if tag == TAG_LIST else DataFrame)(items)
        except (ValueError, AttributeError) as error:
            raise FormatError(f"corrupt bin data: {error}")
    elif tag == TAG_GRAPHIC:
        try:
            value = GraphicsRecording.from_dict(
                json.loads(body.take(size).decode("utf-8"))
            )
        except (ValueError, KeyError, TypeError) as error:
            raise FormatError(f"corrupt bin data: {error}")
    else:
        if load_function is None:
            raise FormatError("functions cannot be imported from bin")
        value = load_function(body.byte(), body.text())
    if body.pos != body.end:
        raise FormatError("corrupt bin data: trailing bytes in value")
    return value


def decode_bin(
    raw: bytes, load_function: Optional[FunctionLoader] = None
) -> Value:
    """
    Decode a value.

    :param raw: The encoded bytes.
    :param load_function: Callback turning a stored function (0 for a
        closure source, 1 for a builtin name) into a value. Without it
        stored functions are an error.
    :raise FormatError: For corrupt, truncated or unknown data.
    :return: The value.
    """
    if raw[:4] != MAGIC:
        raise FormatError("corrupt bin data: missing SGB1 magic")
    reader = _Reader(raw, 4)
    value = _decode(reader, load_function)
    if reader.pos != reader.end:
        raise FormatError("corrupt bin data: trailing bytes")
    return value


def function_loader(env: Mapping[str, Value]) -> FunctionLoader:
    """
    Build a loader that restores stored functions as closures over the
    given namespace.

    :param env: Namespace the restored closures are bound to.
    :return: The loader for decode_bin.
    """

    def load(kind: int, text: str) -> Value:
        if kind == 1:
            return Builtin(text)
        try:
            definition = parse_single(text)
        except LangError as error:
            raise FormatError(f"corrupt function source: {error}")
        if not isinstance(definition, FunctionDef):
            raise FormatError("corrupt function source")
        return Closure(definition.params, definition.body, env)

    return load

