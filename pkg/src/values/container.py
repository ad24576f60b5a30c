"""
Containers give a uniform view over static packages and dynamic sessions:
a namespace, data sets, files, graphics, manuals and (for sessions) the
source, stdout and console of the RPC that created them.
"""

import re
from enum import Enum
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from src.errors import NotFoundError
from src.values.graphics import GraphicsRecording
from src.values.paths import ResourcePath
from src.values.value import ListValue, Value, number, string

GRAPHIC_INDEX = re.compile(r"^[1-9][0-9]*$")
TEXT_SECTIONS = ("source", "stdout", "console", "warnings")
FILES_SECTION = "files"
SECTIONS = ("R", "data", "man", "graphics", "info", FILES_SECTION)
RESERVED = SECTIONS + TEXT_SECTIONS


class ContainerKind(str, Enum):
    """
    The two container kinds
    """

    PACKAGE = "package"
    SESSION = "session"


class ResourceKind(str, Enum):
    """
    Kinds of resources a path can resolve to
    """

    OBJECT = "object"
    DATA = "data"
    MANUAL = "manual"
    GRAPHIC = "graphic"
    FILE = "file"
    LISTING = "listing"
    SOURCE = "source"
    STDOUT = "stdout"
    CONSOLE = "console"
    WARNINGS = "warnings"
    INFO = "info"


class ManualPage:
    """
    A manual page documenting an object or data set of a container.
    """

    def __init__(
        self,
        name: str,
        title: str,
        description: str = "",
        usage: str = "",
        arguments: Iterable[Tuple[str, str]] = (),
    ) -> None:
        """
        Create a manual page.

        :param name: Name of the documented object.
        :param title: One line title.
        :param description: Free text description.
        :param usage: Usage text.
        :param arguments: Ordered (argument name, description) pairs.
        """
        self.name = name
        self.title = title
        self.description = description
        self.usage = usage
        self.arguments = tuple(arguments)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ManualPage):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the manual into a json compatible dictionary.

        :return: The dictionary.
        """
        return {
            "name": self.name,
            "title": self.title,
            "description": self.description,
            "usage": self.usage,
            "arguments": dict(self.arguments),
        }


class Container:
    """
    Immutable container of resources. Package and session containers share
    this class; the kind only changes which sections are populated.
    """

    def __init__(
        self,
        kind: ContainerKind,
        name: str,
        namespace: Mapping[str, Value],
        data: Optional[Mapping[str, Value]] = None,
        files: Optional[Mapping[str, bytes]] = None,
        graphics: Iterable[GraphicsRecording] = (),
        manuals: Optional[Mapping[str, ManualPage]] = None,
        source: Optional[str] = None,
        stdout: Optional[str] = None,
        console: Optional[str] = None,
        warnings: Optional[str] = None,
        meta: Optional[Mapping[str, Any]] = None,
    ) -> None:
        """
        Create a container.

        :param kind: Package or session.
        :param name: Package name or session key.
        :param namespace: Name to object mapping.
        :param data: Name to data set mapping (packages).
        :param files: Relative path to file content mapping.
        :param graphics: Graphics recordings in creation order.
        :param manuals: Name to manual page mapping.
        :param source: Source of the creating RPC (sessions).
        :param stdout: Output of the creating RPC (sessions).
        :param console: Console transcript of the creating RPC (sessions).
        :param warnings: Warnings of the creating RPC (sessions).
        :param meta: Package manifest or session timestamps.
        """
        self.kind = ContainerKind(kind)
        self.name = name
        self.namespace = MappingProxyType(dict(namespace))
        self.data = MappingProxyType(dict(data or {}))
        self.files = MappingProxyType(dict(files or {}))
        self.graphics = tuple(graphics)
        self.manuals = MappingProxyType(dict(manuals or {}))
        self.source = source
        self.stdout = stdout
        self.console = console
        self.warnings = warnings
        self.meta = MappingProxyType(dict(meta or {}))


class Resource:
    """
    Handle to a resolved resource.
    """

    def __init__(self, kind: ResourceKind, name: str, value: Any) -> None:
        """
        Create a resource handle.

        :param kind: What kind of resource it is.
        :param name: The name or relative path of the resource.
        :param value: The value, manual, recording, bytes, text or listing.
        """
        self.kind = kind
        self.name = name
        self.value = value

    def __repr__(self) -> str:
        return f"<Resource {self.kind.value} {self.name}>"


def visible_names(names: Iterable[str]) -> List[str]:
    """
    Filter out hidden names (starting with "."), which are fetchable by
    exact name but never listed.

    :param names: Names to filter.
    :return: Visible names in their original order.
    """
    return [name for name in names if not name.startswith(".")]


def top_level_entries(container: Container) -> List[str]:
    """
    List the entries of a container root, directories end with "/".

    :param container: The container.
    :return: Entry names.
    """
    entries = ["R/"]
    if container.data:
        entries.append("data/")
    if container.manuals:
        entries.append("man/")
    if container.kind == ContainerKind.SESSION:
        entries.append("graphics/")
    for section in TEXT_SECTIONS:
        if getattr(container, section) is not None:
            entries.append(section)
    entries.append("info")
    if container.kind == ContainerKind.SESSION and container.files:
        entries.append(FILES_SECTION + "/")
    entries.extend(_directory_entries(container.files, ""))
    return entries


def _directory_entries(files: Mapping[str, bytes], prefix: str) -> List[str]:
    """
    Immediate children of a directory in a flat file mapping.

    :param files: Relative path to content mapping.
    :param prefix: Directory path ending with "/", or "" for the root.
    :return: Sorted entries, subdirectories end with "/".
    """
    entries = set()
    for path in files.keys():
        if not path.startswith(prefix):
            continue
        rest = path[len(prefix) :]
        if "/" in rest:
            entries.add(rest.split("/", 1)[0] + "/")
        else:
            entries.add(rest)
    return sorted(visible_names(entries))


def info_value(container: Container) -> ListValue:
    """
    Convert the container meta data into a list value.

    :param container: The container.
    :return: List with one scalar per meta entry.
    """
    items = [("kind", string(container.kind.value))]
    for name, value in container.meta.items():
        if isinstance(value, bool) or value is None:
            items.append((name, string(str(value))))
        elif isinstance(value, (int, float)):
            items.append((name, number(float(value))))
        else:
            items.append((name, string(str(value))))
    return ListValue(items)


def resolve_resource(container: Container, path: ResourcePath) -> Resource:
    """
    Resolve a resource path inside a container. Never mutates the
    container.

    :param container: The container to look into.
    :param path: The resource path (only its segments are used).
    :raise NotFoundError: If nothing exists at the path.
    :return: The resource handle.
    """
    segments = path.segments
    if not segments:
        return Resource(
            ResourceKind.LISTING, "", top_level_entries(container)
        )
    head, rest = segments[0], segments[1:]
    sections = {
        "R": (container.namespace, ResourceKind.OBJECT),
        "data": (container.data, ResourceKind.DATA),
        "man": (container.manuals, ResourceKind.MANUAL),
    }
    if head in sections:
        mapping, kind = sections[head]
        if not rest:
            return Resource(
                ResourceKind.LISTING, head, visible_names(mapping.keys())
            )
        if len(rest) == 1 and rest[0] in mapping:
            return Resource(kind, rest[0], mapping[rest[0]])
        raise NotFoundError(
            f'"{"/".join(segments)}" does not exist in {container.name}'
        )
    if head == "graphics":
        if not rest:
            names = [str(i + 1) for i in range(len(container.graphics))]
            return Resource(ResourceKind.LISTING, head, names)
        if len(rest) == 1 and GRAPHIC_INDEX.match(rest[0]):
            index = int(rest[0])
            if index <= len(container.graphics):
                return Resource(
                    ResourceKind.GRAPHIC,
                    rest[0],
                    container.graphics[index - 1],
                )
        raise NotFoundError(
            f'Graphic "{"/".join(rest)}" does not exist in {container.name}'
        )
    if head in TEXT_SECTIONS and not rest:
        text = getattr(container, head)
        if text is None:
            raise NotFoundError(f'"{head}" does not exist in {container.name}')
        return Resource(ResourceKind(head), head, text)
    if head == "info" and not rest:
        return Resource(ResourceKind.INFO, head, info_value(container))
    if head == FILES_SECTION and container.kind == ContainerKind.SESSION:
        return _resolve_file(container, rest)
    return _resolve_file(container, segments)


def _resolve_file(
    container: Container, segments: Tuple[str, ...]
) -> Resource:
    """
    Resolve a file or directory of a container, the empty path lists the
    top level files.
    """
    relative = "/".join(segments)
    if not segments:
        return Resource(
            ResourceKind.LISTING,
            FILES_SECTION,
            _directory_entries(container.files, ""),
        )
    if relative in container.files:
        return Resource(ResourceKind.FILE, relative, container.files[relative])
    entries = _directory_entries(container.files, relative + "/")
    if entries:
        return Resource(ResourceKind.LISTING, relative, entries)
    raise NotFoundError(f'"{relative}" does not exist in {container.name}')
