"""
Routing of request paths below the API root.

    {root}/                          root listing
    {root}/library/                  package listing
    {root}/library/{pkg}/...         package resources
    {root}/tmp/{key}/...             session resources
    {root}/tmp/{key}/replay          POST: replay the session
    {root}/run                       POST: execute an uploaded script

A trailing format segment of a GET path (e.g. /json) selects the export
format, the query string its formatting parameters. After an object, data
set, manual, graphic or text section the segment always is a format.
Elsewhere it may also be a name (an object called "print", a file called
"csv"), so the handler resolves it as a name first and as a format only if
nothing has that name. Container roots
without trailing slash redirect to the slash form. There is no listing of
{root}/tmp/.
"""

from typing import Mapping, Optional, Sequence

from src.errors import MethodNotAllowed, NotFoundError, Redirect
from src.formats.export_format import ExportFormatFactory
from src.values.container import TEXT_SECTIONS
from src.values.paths import ResourcePath

METHODS = ("GET", "POST")
ROOT = "root"
PACKAGES = "packages"
RESOURCE = "resource"
RPC = "rpc"
REPLAY = "replay"
RUN = "run"
# Sections whose entries are addressed by one further segment.
NAMED_SECTIONS = ("R", "data", "man", "graphics")
SINGLE_SECTIONS = TEXT_SECTIONS + ("info",)


class Route:
    """
    The outcome of routing a request.
    """

    def __init__(
        self,
        action: str,
        path: Optional[ResourcePath] = None,
        format_id: Optional[str] = None,
        params: Optional[Mapping[str, str]] = None,
        fallback_format: Optional[str] = None,
    ) -> None:
        """
        Create the route.

        :param action: One of root, packages, resource, rpc, replay, run.
        :param path: The resource path for resource, rpc and replay.
        :param format_id: Requested export format for GET requests.
        :param params: Formatting parameters for GET requests.
        :param fallback_format: Last path segment that names a format if
            no resource has that name.
        """
        self.action = action
        self.path = path
        self.format_id = format_id
        self.params = dict(params or {})
        self.fallback_format = fallback_format

    def formatted(self) -> "Route":
        """
        Read the last path segment as the export format.

        :return: The route of the shortened path with that format.
        """
        path = self.path
        resource = ResourcePath(
            path.library,
            path.container,
            path.segments[:-1],
            self.fallback_format,
            self.params,
        )
        return Route(RESOURCE, resource, self.fallback_format, self.params)

    def __repr__(self) -> str:
        return f"<Route {self.action} {self.path} format={self.format_id}>"


def _with_query(location: str, query: str) -> str:
    return f"{location}?{query}" if query else location


def route(
    method: str,
    path: str,
    root: str,
    params: Optional[Mapping[str, str]] = None,
    query: str = "",
) -> Route:
    """
    Route a request.

    :param method: The HTTP method.
    :param path: The decoded request path.
    :param root: The API root prefix, e.g. /ocpu.
    :param params: Query parameters.
    :param query: The raw query string, kept on redirects.
    :raise MethodNotAllowed: For methods other than GET and POST and for
        methods not applicable to the route.
    :raise Redirect: For container roots without trailing slash.
    :raise NotFoundError: For paths outside the API tree.
    :return: The route.
    """
    if method not in METHODS:
        raise MethodNotAllowed(f"Method {method} is not allowed")
    if path == root:
        raise Redirect(_with_query(root + "/", query))
    if not path.startswith(root + "/"):
        raise NotFoundError(f'"{path}" does not exist')
    rest = path[len(root) + 1 :]
    trailing_slash = rest.endswith("/")
    parts = rest.split("/")
    if trailing_slash:
        parts.pop()
    if parts == [""]:
        return _get_only(method, Route(ROOT, params=params))
    if parts == ["run"]:
        if method != "POST":
            raise MethodNotAllowed("Only POST is allowed on the run endpoint")
        return Route(RUN)
    library, container = parts[0], parts[1] if len(parts) > 1 else ""
    if library == "library" and len(parts) == 1:
        if not trailing_slash:
            raise Redirect(_with_query(f"{root}/library/", query))
        return _get_only(method, Route(PACKAGES, params=params))
    if library not in ("library", "tmp") or not container:
        raise NotFoundError(f'"{path}" does not exist')
    segments = parts[2:]
    if not segments and not trailing_slash:
        raise Redirect(_with_query(f"{root}/{library}/{container}/", query))
    try:
        if library == "tmp" and segments == ["replay"] and method == "POST":
            return Route(REPLAY, ResourcePath(library, container))
        if method == "POST":
            return Route(
                RPC, ResourcePath(library, container, segments, None)
            )
        format_id = fallback = None
        if (
            segments
            and not trailing_slash
            and ExportFormatFactory.is_format(segments[-1])
        ):
            if _addresses_entry(segments[:-1]):
                format_id = segments.pop()
            else:
                fallback = segments[-1]
        resource = ResourcePath(
            library,
            container,
            segments,
            format_id,
            params,
            trailing_slash,
        )
    except ValueError:
        raise NotFoundError(f'"{path}" does not exist')
    return Route(RESOURCE, resource, format_id, params, fallback)


def _addresses_entry(segments: Sequence[str]) -> bool:
    if len(segments) == 2:
        return segments[0] in NAMED_SECTIONS
    return len(segments) == 1 and segments[0] in SINGLE_SECTIONS


def _get_only(method: str, routed: Route) -> Route:
    if method != "GET":
        raise MethodNotAllowed("Only GET is allowed on listings")
    return routed
