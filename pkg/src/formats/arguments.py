"""
Import of RPC arguments from request fields.

Text fields resolve in this order: a session key stands for the .val of
that session, key::name for a named object of the session, anything else
is parsed as a single expression and evaluated in an empty context that
shares the budget of the call. JSON body fields follow the JSON mapping.
Uploaded files are written into the working directory of the call and
the argument becomes the file name.
"""

import hashlib
import os
from enum import Enum
from typing import Any, Callable, Optional

from src.errors import (
    ArgumentError,
    GatewayError,
    NotFoundError,
    ResourceError,
)
from src.formats.json_codec import from_json_data
from src.lang.context import Budget, EvalContext
from src.lang.evaluator import VALUE_NAME, evaluate
from src.lang.parser import parse_single
from src.values.container import Container
from src.values.keys import KEY_PATTERN, KEY_REFERENCE_PATTERN
from src.values.value import Value, string


class ArgumentOrigin(str, Enum):
    """
    Where an argument came from
    """

    URLENCODED = "urlencoded-field"
    MULTIPART_FIELD = "multipart-field"
    MULTIPART_FILE = "multipart-file"
    JSON_FIELD = "json-body-field"


class ArgumentSource:
    """
    One raw argument of a request.
    """

    def __init__(
        self,
        origin: ArgumentOrigin,
        name: str,
        raw: Any,
        filename: Optional[str] = None,
    ) -> None:
        """
        Create the argument source.

        :param origin: Where the argument came from.
        :param name: The argument name.
        :param raw: Bytes for fields and files, parsed json for json fields.
        :param filename: Client file name, required for file uploads.
        :raise ValueError: If the name is empty or a file has no name.
        """
        if not name:
            raise ValueError("Argument names must not be empty!")
        origin = ArgumentOrigin(origin)
        if origin == ArgumentOrigin.MULTIPART_FILE and not filename:
            raise ValueError("File arguments need a file name!")
        self.origin = origin
        self.name = name
        self.raw = raw
        self.filename = filename

    def __repr__(self) -> str:
        return f"ArgumentSource({self.origin.value}, {self.name})"


class ImportedArgument:
    """
    A resolved argument and how it was obtained, as needed by the call
    record: kind is "code", "json", "key" or "file".
    """

    def __init__(
        self,
        name: str,
        value: Value,
        kind: str,
        reference: Optional[str] = None,
        digest: Optional[str] = None,
    ) -> None:
        self.name = name
        self.value = value
        self.kind = kind
        self.reference = reference
        self.digest = digest


Lookup = Callable[[str], Container]


def _resolve_key(name: str, key: str, object_name: str, lookup: Lookup):
    try:
        container = lookup(key)
    except NotFoundError:
        raise ArgumentError(name, f"session {key} does not exist")
    if object_name not in container.namespace:
        raise ArgumentError(
            name, f'session {key} has no object "{object_name}"'
        )
    return container.namespace[object_name]


def _safe_filename(name: str, filename: str) -> str:
    base = os.path.basename(filename.replace("\\", "/"))
    if base in ("", ".", ".."):
        raise ArgumentError(name, f'invalid file name "{filename}"')
    return base


def import_argument(
    source: ArgumentSource,
    lookup: Lookup,
    budget: Optional[Budget] = None,
    workdir: Optional[str] = None,
    seed: int = 0,
) -> ImportedArgument:
    """
    Resolve one argument.

    :param source: The raw argument.
    :param lookup: Function loading a session container by key, raising
        NotFoundError for unknown keys.
    :param budget: Budget charged by code arguments.
    :param workdir: Working directory receiving uploaded files.
    :param seed: Seed of the context code arguments are evaluated in.
    :raise ArgumentError: For unknown keys and failing code.
    :return: The imported argument.
    """
    name = source.name
    if source.origin == ArgumentOrigin.JSON_FIELD:
        try:
            return ImportedArgument(name, from_json_data(source.raw), "json")
        except GatewayError as error:
            raise ArgumentError(name, str(error))
    if source.origin == ArgumentOrigin.MULTIPART_FILE:
        if workdir is None:
            raise ArgumentError(name, "file uploads are not possible here")
        filename = _safe_filename(name, source.filename)
        with open(os.path.join(workdir, filename), "wb") as handle:
            handle.write(source.raw)
        digest = hashlib.sha256(source.raw).hexdigest()
        return ImportedArgument(
            name, string(filename), "file", filename, digest
        )
    try:
        text = source.raw.decode("utf-8").strip()
    except UnicodeDecodeError:
        raise ArgumentError(name, "the field is not valid UTF-8")
    if KEY_PATTERN.match(text):
        value = _resolve_key(name, text, VALUE_NAME, lookup)
        return ImportedArgument(name, value, "key", text)
    match = KEY_REFERENCE_PATTERN.match(text)
    if match:
        value = _resolve_key(name, match.group(1), match.group(2), lookup)
        return ImportedArgument(name, value, "key", text)
    ctx = EvalContext(seed=seed, budget=budget)
    try:
        value = evaluate(parse_single(text), ctx)
    except ResourceError:
        raise
    except GatewayError as error:
        raise ArgumentError(name, str(error))
    return ImportedArgument(name, value, "code", text)
