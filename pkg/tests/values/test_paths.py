""" Test resource paths. """

import pytest

from src.values.paths import ResourcePath


def test_resource_path_urls():
    path = ResourcePath("library", "demo", ["R", "center"])
    assert path.relative == "R/center"
    assert path.container_url("/ocpu") == "/ocpu/library/demo/"
    assert path.url("/ocpu") == "/ocpu/library/demo/R/center"

    folder = ResourcePath("tmp", "x0123456789abcdef012", ["R"], None, {}, True)
    assert folder.url("/ocpu") == "/ocpu/tmp/x0123456789abcdef012/R/"

    root = ResourcePath("library", "demo", [], None, {}, True)
    assert root.url("") == "/library/demo/"


def test_resource_path_equality():
    first = ResourcePath("library", "demo", ["R", "x"], "json", {"a": "1"})
    second = ResourcePath("library", "demo", ("R", "x"), "json", {"a": "1"})
    assert first == second
    assert hash(first) == hash(second)
    assert first != ResourcePath("library", "demo", ["R", "x"], "json")
    assert first != ResourcePath("library", "demo", ["R", "X"], "json")


@pytest.mark.parametrize(
    "library, container, segments",
    [
        ("lib", "demo", []),
        ("library", "", []),
        ("library", "demo", [""]),
        ("library", "demo", ["."]),
        ("library", "demo", ["R", ".."]),
        ("tmp", "x0123456789abcdef012", ["a/b"]),
    ],
)
def test_invalid_resource_paths(library, container, segments):
    with pytest.raises(ValueError):
        ResourcePath(library, container, segments)


def test_params_are_read_only():
    path = ResourcePath("library", "demo", ["R"], "json", {"digits": "3"})
    with pytest.raises(TypeError):
        path.params["digits"] = "4"
