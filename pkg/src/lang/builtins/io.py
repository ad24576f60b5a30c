""" Builtins reading and writing files and printing values. """

import os
from pathlib import PurePosixPath
from typing import Optional

from src.errors import FormatError, LangError
from src.formats.printing import print_value
from src.formats.tabular import export_table, parse_table
from src.lang.builtins.coercion import count, text
from src.lang.builtins.registry import builtin
from src.values.value import NULL, DataFrame


def safe_relative(name: str) -> str:
    """
    Validate a file name used by code. Only relative paths without upward
    traversal are accepted.

    :param name: The file name.
    :raise LangError: If the path is absolute or leaves its directory.
    :return: The normalized relative path.
    """
    path = PurePosixPath(name)
    if (
        not name
        or "\\" in name
        or path.is_absolute()
        or any(part in ("", ".", "..") for part in name.split("/"))
    ):
        raise LangError("eval", f"invalid file name '{name}'")
    return str(path)


def resolve_input(ctx, name: str) -> str:
    """
    Find a file for reading, first in the working directory, then in the
    read-only roots (e.g. the directory of the calling package).

    :param ctx: The evaluation context.
    :param name: Relative file name.
    :raise LangError: If the file does not exist.
    :return: The absolute path.
    """
    relative = safe_relative(name)
    roots = ([ctx.workdir] if ctx.workdir else []) + ctx.readonly_roots
    for root in roots:
        candidate = os.path.join(root, relative)
        if os.path.isfile(candidate):
            return candidate
    raise LangError(
        "eval", f"cannot open file '{name}': No such file or directory"
    )


def resolve_output(ctx, name: str) -> str:
    """
    Location of a file written by code, inside the working directory.

    :param ctx: The evaluation context.
    :param name: Relative file name.
    :raise LangError: If the context has no working directory.
    :return: The absolute path.
    """
    relative = safe_relative(name)
    if not ctx.workdir:
        raise LangError("eval", "writing files is not possible here")
    path = os.path.join(ctx.workdir, relative)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    return path


@builtin(
    "read_csv",
    params=("file",),
    title="Read a CSV file",
    arguments={"file": "Relative name of the file."},
    description="Reads a comma separated file with a header line into a "
    "data frame. Empty fields are NA. Columns of numbers become numeric, "
    "columns of TRUE and FALSE logical, all others character.",
)
def read_csv(ctx, file):
    path = resolve_input(ctx, text(file, "file"))
    with open(path, "rb") as handle:
        raw = handle.read()
    ctx.budget.charge(len(raw) // 2 + 1)
    try:
        return parse_table(raw)
    except FormatError as error:
        raise LangError("eval", f"cannot read '{file.element(0)}': {error}")


@builtin(
    "write_csv",
    params=("x", "file"),
    title="Write a data frame as CSV",
    invisible=True,
    arguments={
        "x": "A data frame.",
        "file": "Relative name of the file in the working directory.",
    },
)
def write_csv(ctx, x, file):
    if not isinstance(x, DataFrame):
        raise LangError("eval", "write_csv needs a data frame")
    path = resolve_output(ctx, text(file, "file"))
    with open(path, "wb") as handle:
        handle.write(export_table(x))
    return NULL


@builtin(
    "print",
    params=("x", ("digits", NULL)),
    title="Print a value",
    invisible=True,
    arguments={
        "x": "Any value.",
        "digits": "Number of significant digits, 7 by default.",
    },
    description="Writes the value to stdout and returns it invisibly.",
)
def print_(ctx, x, digits):
    significant: Optional[int] = None
    if digits is not NULL:
        significant = count(digits, "digits")
        if not 1 <= significant <= 22:
            raise LangError("eval", "invalid 'digits' argument")
    ctx.write(print_value(x, significant or 7) + "\n")
    return x
