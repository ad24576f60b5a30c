""" Test the package library and container lookup. """

import os
import shutil

import pytest

from src.errors import LoadError, NotFoundError
from src.store.config import LibraryConfig
from src.store.library import PackageLibrary, base_package, load_container
from src.store.session_store import SessionOutputs, SessionStore
from src.utils.logging import ServerLogger
from src.values.keys import DeterministicKeyGenerator
from src.values.value import Builtin, number

LIBRARY = os.path.join(os.path.dirname(__file__), "..", "..", "library")


def make_library(tmp_path, package_root=LIBRARY, logger=None):
    config = LibraryConfig(
        package_root=str(package_root),
        session_root=str(tmp_path / "sessions"),
    )
    return PackageLibrary(config, logger)


def test_base_package():
    container = base_package().container
    assert container.name == "base"
    mean = container.namespace["mean"]
    assert isinstance(mean, Builtin) and mean.name == "mean"
    page = container.manuals["mean"]
    assert page.title == "Arithmetic mean"
    assert page.usage == "mean(x, na_rm = FALSE)"
    assert [name for name, _ in page.arguments] == ["x", "na_rm"]
    assert set(container.manuals) == set(container.namespace)


def test_reload(tmp_path):
    logger = ServerLogger("WARNING")
    library = make_library(tmp_path, logger=logger)
    assert library.names() == ["base"]
    loaded = library.reload()
    assert [record.id for record in loaded] == ["demo"]
    assert library.names() == ["base", "demo"]
    assert "center" in library.package("demo").namespace
    assert logger.logs["name"] == ["demo"]
    with pytest.raises(NotFoundError):
        library.package("nope")


def test_reload_failure_keeps_registry(tmp_path):
    root = tmp_path / "packages"
    shutil.copytree(os.path.join(LIBRARY, "demo"), root / "one")
    library = make_library(tmp_path, root)
    library.reload()
    shutil.copytree(os.path.join(LIBRARY, "demo"), root / "two")
    with pytest.raises(LoadError, match="loaded twice"):
        library.reload()
    assert library.names() == ["base", "demo"]


def test_reload_skips_directories_without_manifest(tmp_path):
    root = tmp_path / "packages"
    (root / "empty").mkdir(parents=True)
    (root / "README").write_text("not a package")
    library = make_library(tmp_path, root)
    assert library.reload() == []
    assert library.names() == ["base"]


def test_missing_package_root(tmp_path):
    library = make_library(tmp_path, tmp_path / "missing")
    with pytest.raises(LoadError, match="does not exist"):
        library.reload()


def test_load_container(tmp_path):
    library = make_library(tmp_path)
    library.reload()
    sessions = SessionStore(
        library.config, DeterministicKeyGenerator(0), lambda: 0.0
    )
    key = str(sessions.save(SessionOutputs({".val": number(1)})))
    assert load_container(library, sessions, "library", "demo").name == (
        "demo"
    )
    assert load_container(library, sessions, "tmp", key).name == key
    with pytest.raises(NotFoundError):
        load_container(library, sessions, "tmp", "x0000000000000000000")
    with pytest.raises(NotFoundError):
        load_container(library, sessions, "other", "demo")
