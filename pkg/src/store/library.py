"""
The package library: a registry of loaded packages that is swapped as a
whole on reload, plus the synthetic base package exposing the builtins.
"""

import os
import threading
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional

from src import __version__
from src.errors import LoadError, NotFoundError
from src.lang.builtins import BUILTINS, DOTS, BuiltinSpec
from src.lang.deparse import deparse_value
from src.store.config import LibraryConfig
from src.store.package_loader import MANIFEST, PackageRecord, load_package_dir
from src.store.session_store import SessionStore
from src.utils.logging import ServerLogger
from src.values.container import Container, ContainerKind, ManualPage
from src.values.value import Builtin, Value

BASE_PACKAGE = "base"


def _usage(spec: BuiltinSpec) -> str:
    params = []
    for name, default in spec.params:
        if name == DOTS or not isinstance(default, Value):
            params.append(name)
        else:
            params.append(f"{name} = {deparse_value(default)}")
    return f"{spec.name}({', '.join(params)})"


def base_package() -> PackageRecord:
    """
    Build the base package: one function object and one manual page per
    builtin.

    :return: The package record.
    """
    namespace = {name: Builtin(name) for name in sorted(BUILTINS)}
    manuals = {
        name: ManualPage(
            name,
            spec.title or name,
            spec.description,
            _usage(spec),
            [
                (formal, spec.arguments.get(formal, ""))
                for formal in spec.formals
            ],
        )
        for name, spec in BUILTINS.items()
    }
    container = Container(
        ContainerKind.PACKAGE,
        BASE_PACKAGE,
        namespace,
        manuals=manuals,
        meta={"name": BASE_PACKAGE, "version": __version__},
    )
    return PackageRecord(BASE_PACKAGE, __version__, container, "")


class PackageLibrary:
    """
    Registry of the packages below the package root. Readers see an
    immutable snapshot; reload replaces the snapshot in one assignment.
    """

    def __init__(
        self, config: LibraryConfig, logger: Optional[ServerLogger] = None
    ) -> None:
        """
        Create an empty library holding only the base package.

        :param config: Configuration naming the package root.
        :param logger: Optional logger, one event per loaded package.
        """
        self.config = config
        self.logger = logger
        self.lock = threading.Lock()
        base = base_package()
        self.packages: Mapping[str, PackageRecord] = MappingProxyType(
            {base.id: base}
        )

    def reload(self) -> List[PackageRecord]:
        """
        Load every package directory (a directory with a MANIFEST) below
        the package root and swap the registry.

        :raise LoadError: If a package fails to load or two directories
            declare the same package name. The registry is unchanged then.
        :return: The loaded packages, base excluded.
        """
        root = os.path.abspath(self.config.package_root)
        if not os.path.isdir(root):
            raise LoadError(root, "package root does not exist")
        base = base_package()
        packages: Dict[str, PackageRecord] = {base.id: base}
        loaded = []
        with self.lock:
            for name in sorted(os.listdir(root)):
                directory = os.path.join(root, name)
                if not os.path.isfile(os.path.join(directory, MANIFEST)):
                    continue
                record = load_package_dir(directory)
                if record.id in packages:
                    raise LoadError(
                        directory, f'package "{record.id}" is loaded twice'
                    )
                packages[record.id] = record
                loaded.append(record)
                if self.logger is not None:
                    self.logger.log_event(
                        {
                            "event": "package",
                            "name": record.id,
                            "version": record.version,
                            "path": directory,
                        }
                    )
            self.packages = MappingProxyType(packages)
        return loaded

    def names(self) -> List[str]:
        return sorted(self.packages.keys())

    def package(self, name: str) -> Container:
        """
        Return the container of a package.

        :param name: The package name.
        :raise NotFoundError: If no such package is loaded.
        :return: The package container.
        """
        record = self.packages.get(name)
        if record is None:
            raise NotFoundError(f'Package "{name}" does not exist')
        return record.container


def load_container(
    library: PackageLibrary, sessions: SessionStore, kind: str, name: str
) -> Container:
    """
    Load a container by library kind and id. Packages and sessions are
    addressed the same way.

    :param library: The package library.
    :param sessions: The session store.
    :param kind: "library" for packages, "tmp" for sessions.
    :param name: The package name or the session key.
    :raise NotFoundError: For unknown packages and unknown or expired
        sessions.
    :return: The container.
    """
    if kind == "library":
        return library.package(name)
    if kind == "tmp":
        return sessions.load(name)
    raise NotFoundError(f'Library "{kind}" does not exist')
