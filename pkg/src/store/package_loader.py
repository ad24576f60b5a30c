"""
Loading of package directories.

A package directory holds a MANIFEST (key: value lines with at least name
and version), scripts under R/, data sets under data/, manuals under man/
and any other files, which are served verbatim.
"""

import os
import re
from typing import Dict, Iterable, Optional

from src.errors import GatewayError, LoadError
from src.formats.json_codec import import_json
from src.formats.manual import parse_manual
from src.formats.tabular import parse_table
from src.lang.context import Budget, EvalContext
from src.lang.evaluator import VALUE_NAME, run_script
from src.store.session_store import read_files
from src.utils.logging import EvaluationLogger
from src.values.container import Container, ContainerKind, ManualPage
from src.values.value import Value

MANIFEST = "MANIFEST"
PACKAGE_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9.]*$")
VERSION = re.compile(r"^[0-9]+(\.[0-9]+)*$")
SECTIONS = ("R", "data", "man")
LOAD_TIMEOUT = 60.0
LOAD_CELL_LIMIT = 10**7


class PackageRecord:
    """
    A loaded package: its name, version, container and source directory.
    """

    def __init__(
        self, name: str, version: str, container: Container, loaded_from: str
    ) -> None:
        self.id = name
        self.version = version
        self.container = container
        self.loaded_from = loaded_from

    def __repr__(self) -> str:
        return f"<PackageRecord {self.id} {self.version}>"


def parse_manifest(path: str) -> Dict[str, str]:
    """
    Parse a MANIFEST file. Blank lines and lines starting with "#" are
    ignored.

    :param path: Path of the manifest.
    :raise LoadError: If the file is missing, malformed or lacks a valid
        name or version.
    :return: The manifest fields in file order.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except (OSError, UnicodeDecodeError) as error:
        raise LoadError(path, f"cannot read manifest ({error})")
    fields = {}
    for number, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep or not key.strip():
            raise LoadError(path, f"line {number} is not a key: value pair")
        if key.strip() in fields:
            raise LoadError(path, f'duplicate key "{key.strip()}"')
        fields[key.strip()] = value.strip()
    if not PACKAGE_NAME.match(fields.get("name", "")):
        raise LoadError(path, "missing or invalid package name")
    if not VERSION.match(fields.get("version", "")):
        raise LoadError(path, "missing or invalid version")
    return fields


def _listing(directory: str, extension: str):
    if not os.path.isdir(directory):
        return []
    return sorted(
        name
        for name in os.listdir(directory)
        if name.endswith(extension)
        and os.path.isfile(os.path.join(directory, name))
    )


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as error:
        raise LoadError(path, f"cannot read file ({error})")


def _run_scripts(directory: str, logger: Optional[EvaluationLogger]):
    """
    Run every R/*.r script in name order in one shared namespace, each
    with a fresh generator seeded with 0.

    :param directory: The package directory.
    :param logger: Optional statistics logger.
    :raise LoadError: Naming the first failing script.
    :return: The package namespace.
    """
    folder = os.path.join(directory, "R")
    ctx = EvalContext(
        seed=0,
        budget=Budget(LOAD_TIMEOUT, LOAD_CELL_LIMIT),
        logger=logger,
    )
    for filename in _listing(folder, ".r"):
        path = os.path.join(folder, filename)
        try:
            source = _read(path).decode("utf-8")
        except UnicodeDecodeError:
            raise LoadError(path, "script is not valid UTF-8")
        ctx.rng.set_seed(0)
        try:
            run_script(source, ctx)
        except GatewayError as error:
            raise LoadError(path, str(error))
        ctx.namespace.pop(VALUE_NAME, None)
    return ctx.namespace


def _load_data(directory: str, namespace: Dict[str, Value]):
    folder = os.path.join(directory, "data")
    data: Dict[str, Value] = {}
    for extension, parse in ((".csv", parse_table), (".json", import_json)):
        for filename in _listing(folder, extension):
            path = os.path.join(folder, filename)
            name = filename[: -len(extension)]
            if name in namespace:
                raise LoadError(
                    path, f'data set "{name}" collides with an object'
                )
            if name in data:
                raise LoadError(path, f'data set "{name}" is defined twice')
            try:
                data[name] = parse(_read(path))
            except GatewayError as error:
                raise LoadError(path, str(error))
    return data


def _load_manuals(
    directory: str, documented: Iterable[str]
) -> Dict[str, ManualPage]:
    """
    Load the manual pages, each must document an object or data set.

    :param directory: The package directory.
    :param documented: Names of the objects and data sets.
    :raise LoadError: Naming an unreadable or orphan manual.
    :return: Name to manual page mapping.
    """
    documented = set(documented)
    folder = os.path.join(directory, "man")
    manuals = {}
    for filename in _listing(folder, ".txt"):
        path = os.path.join(folder, filename)
        name = filename[: -len(".txt")]
        try:
            manuals[name] = parse_manual(name, _read(path).decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as error:
            raise LoadError(path, str(error).rstrip("!"))
        if name not in documented:
            raise LoadError(
                path, f'manual "{name}" documents no object or data set'
            )
    return manuals


def load_package_dir(
    directory: str, logger: Optional[EvaluationLogger] = None
) -> PackageRecord:
    """
    Load a package directory.

    :param directory: The package directory.
    :param logger: Optional logger collecting script statistics.
    :raise LoadError: For a missing or invalid manifest, failing scripts,
        unreadable data or manuals, manuals documenting nothing and name
        collisions. The error names the offending file.
    :return: The package record.
    """
    directory = os.path.abspath(directory)
    manifest = parse_manifest(os.path.join(directory, MANIFEST))
    namespace = _run_scripts(directory, logger)
    data = _load_data(directory, namespace)
    manuals = _load_manuals(directory, [*namespace, *data])
    files = {
        path: content
        for path, content in read_files(directory).items()
        if path.split("/", 1)[0] not in SECTIONS
    }
    container = Container(
        ContainerKind.PACKAGE,
        manifest["name"],
        namespace,
        data=data,
        files=files,
        manuals=manuals,
        meta=manifest,
    )
    return PackageRecord(
        manifest["name"], manifest["version"], container, directory
    )
