""" Test the routing of request paths and the error mapping. """

import pytest

from src.api.errors import map_error
from src.api.routing import (
    PACKAGES,
    REPLAY,
    RESOURCE,
    ROOT,
    RPC,
    RUN,
    route,
)
from src.errors import (
    ArgumentError,
    EvaluatorCrash,
    FormatError,
    LangError,
    MethodNotAllowed,
    NotFoundError,
    PayloadTooLarge,
    Redirect,
    ResourceError,
    UnsupportedMediaType,
)

ROOT_PREFIX = "/ocpu"
KEY = "x0123456789abcdef012"


def test_listings():
    assert route("GET", "/ocpu/", ROOT_PREFIX).action == ROOT
    assert route("GET", "/ocpu/library/", ROOT_PREFIX).action == PACKAGES


def test_resources():
    routed = route("GET", "/ocpu/library/demo/R/center", ROOT_PREFIX)
    assert routed.action == RESOURCE
    assert routed.format_id is None
    assert routed.path.segments == ("R", "center")
    assert routed.path.relative == "R/center"

    routed = route(
        "GET",
        f"/ocpu/tmp/{KEY}/R/.val/print",
        ROOT_PREFIX,
        {"digits": "3"},
    )
    assert routed.format_id == "print"
    assert routed.params == {"digits": "3"}
    assert routed.path.library == "tmp" and routed.path.container == KEY
    assert routed.path.segments == ("R", ".val")

    listing = route("GET", "/ocpu/library/demo/", ROOT_PREFIX).path
    assert listing.segments == () and listing.trailing_slash
    sub = route("GET", "/ocpu/library/demo/R/", ROOT_PREFIX).path
    assert sub.trailing_slash and sub.segments == ("R",)
    formatted = route("GET", "/ocpu/library/demo/R/center/json", ROOT_PREFIX)
    assert formatted.path.format_id == "json"
    assert not formatted.path.trailing_slash
    assert formatted.fallback_format is None


@pytest.mark.parametrize(
    "path, segments, format_id",
    [
        ("/ocpu/library/base/R/print", ("R", "print"), None),
        ("/ocpu/library/base/R/print/json", ("R", "print"), "json"),
        (f"/ocpu/tmp/{KEY}/R/csv", ("R", "csv"), None),
        (f"/ocpu/tmp/{KEY}/R/csv/csv", ("R", "csv"), "csv"),
        (f"/ocpu/tmp/{KEY}/data/json/tab", ("data", "json"), "tab"),
        (f"/ocpu/tmp/{KEY}/graphics/1/svg", ("graphics", "1"), "svg"),
        (f"/ocpu/tmp/{KEY}/console/text", ("console",), "text"),
        (f"/ocpu/tmp/{KEY}/info/json", ("info",), "json"),
        (f"/ocpu/tmp/{KEY}/files/text", ("files", "text"), None),
        ("/ocpu/library/demo/json", ("json",), None),
    ],
)
def test_format_segments(path, segments, format_id):
    routed = route("GET", path, ROOT_PREFIX)
    assert routed.path.segments == segments
    assert routed.format_id == format_id


def test_names_that_look_like_formats():
    routed = route("GET", "/ocpu/library/demo/R/json", ROOT_PREFIX)
    assert routed.format_id is None
    assert routed.fallback_format == "json"
    listing = routed.formatted()
    assert listing.path.segments == ("R",)
    assert listing.format_id == listing.path.format_id == "json"
    slash = route("GET", "/ocpu/library/demo/R/json/", ROOT_PREFIX)
    assert slash.fallback_format is None and slash.path.trailing_slash


def test_unsupported_format_segment_is_routed():
    routed = route("GET", "/ocpu/library/demo/R/center/pdf", ROOT_PREFIX)
    assert routed.format_id == "pdf"


def test_posts():
    assert route("POST", "/ocpu/run", ROOT_PREFIX).action == RUN
    rpc = route("POST", "/ocpu/library/demo/R/center", ROOT_PREFIX)
    assert rpc.action == RPC and rpc.path.segments == ("R", "center")
    assert rpc.path.format_id is None
    replay = route("POST", f"/ocpu/tmp/{KEY}/replay", ROOT_PREFIX)
    assert replay.action == REPLAY and replay.path.container == KEY
    # A file called replay inside a package is an ordinary target.
    assert route("POST", "/ocpu/library/demo/replay", ROOT_PREFIX).action == (
        RPC
    )


@pytest.mark.parametrize(
    "path, query, location",
    [
        ("/ocpu", "", "/ocpu/"),
        ("/ocpu/library", "", "/ocpu/library/"),
        ("/ocpu/library/demo", "", "/ocpu/library/demo/"),
        (f"/ocpu/tmp/{KEY}", "a=1", f"/ocpu/tmp/{KEY}/?a=1"),
    ],
)
def test_redirects(path, query, location):
    with pytest.raises(Redirect) as error:
        route("GET", path, ROOT_PREFIX, query=query)
    assert error.value.location == location


@pytest.mark.parametrize(
    "method, path, error",
    [
        ("PUT", "/ocpu/library/demo/R/center", MethodNotAllowed),
        ("DELETE", "/ocpu/", MethodNotAllowed),
        ("POST", "/ocpu/", MethodNotAllowed),
        ("POST", "/ocpu/library/", MethodNotAllowed),
        ("GET", "/ocpu/run", MethodNotAllowed),
        ("GET", "/other/library/demo/", NotFoundError),
        ("GET", "/ocpu/tmp/", NotFoundError),
        ("GET", "/ocpu/elsewhere/demo/", NotFoundError),
        ("GET", "/ocpu/library/demo/R/../NEWS", NotFoundError),
        ("GET", "/ocpu/library/demo//NEWS", NotFoundError),
    ],
)
def test_invalid_requests(method, path, error):
    with pytest.raises(error):
        route(method, path, ROOT_PREFIX)


def test_other_root_prefix():
    assert route("GET", "/api/v1/", "/api/v1").action == ROOT
    with pytest.raises(NotFoundError):
        route("GET", "/ocpu/", "/api/v1")


@pytest.mark.parametrize(
    "error, status",
    [
        (ResourceError("cell limit", "too many cells"), 503),
        (EvaluatorCrash("boom"), 503),
        (LangError("eval", "object 'y' not found"), 400),
        (LangError("numeric", "rank deficient"), 400),
        (ArgumentError("x", "bad"), 400),
        (FormatError("not applicable"), 400),
        (NotFoundError("gone"), 404),
        (PayloadTooLarge("big"), 413),
        (UnsupportedMediaType("text/xml"), 415),
        (RuntimeError("unexpected"), 500),
    ],
)
def test_error_status(error, status):
    assert map_error(error)[0] == status


def test_error_bodies_and_headers():
    status, body, headers = map_error(Redirect("/ocpu/"))
    assert (status, headers) == (302, {"Location": "/ocpu/"})
    status, body, headers = map_error(MethodNotAllowed("no"))
    assert (status, body, headers) == (405, "no\n", {"Allow": "GET, POST"})
    assert map_error(ArgumentError("x", "bad"))[1] == 'argument "x": bad\n'
