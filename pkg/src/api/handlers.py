"""
Request handlers. GET requests export resources and never change any
state, POST requests run RPCs and answer with the new session.
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.api.routing import PACKAGES, REPLAY, ROOT, RUN, Route
from src.errors import ArgumentError, NotFoundError, Redirect
from src.formats.arguments import ArgumentOrigin, ArgumentSource
from src.formats.export_format import ExportFormat, ExportFormatFactory
from src.formats.exporter import DEFAULT_FORMATS, export
from src.lang.context import Budget
from src.repro.runner import SCRIPT, RpcRunner, RpcTarget
from src.store.config import ServerConfig
from src.store.library import PackageLibrary, load_container
from src.store.session_store import SessionStore
from src.values.container import (
    FILES_SECTION,
    TEXT_SECTIONS,
    Container,
    Resource,
    ResourceKind,
    resolve_resource,
)
from src.values.keys import SessionKey

TEXT_TYPES = ("text/plain", "text/csv", "text/html")
SEED_FIELD = ".seed"
SCRIPT_FIELD = "file"


class ApiResponse:
    """
    Status, body and headers of a response.
    """

    def __init__(
        self,
        status: int,
        body: bytes,
        media_type: str = "text/plain",
        headers: Optional[Mapping[str, str]] = None,
    ) -> None:
        self.status = status
        self.body = body
        self.media_type = media_type
        self.headers = dict(headers or {})

    @property
    def content_type(self) -> str:
        if self.media_type in TEXT_TYPES:
            return f"{self.media_type}; charset=utf-8"
        return self.media_type


def session_paths(container: Container, root: str) -> List[str]:
    """
    Paths of every resource of a new session, as listed in 201 bodies.

    :param container: The session container.
    :param root: The API root prefix.
    :return: Absolute resource paths.
    """
    base = f"{root}/tmp/{container.name}/"
    paths = [f"{base}R/{name}" for name in sorted(container.namespace)]
    paths += [
        f"{base}graphics/{index}"
        for index in range(1, len(container.graphics) + 1)
    ]
    paths += [
        f"{base}{FILES_SECTION}/{path}" for path in sorted(container.files)
    ]
    paths += [
        f"{base}{section}"
        for section in TEXT_SECTIONS
        if getattr(container, section) is not None
    ]
    return paths + [f"{base}info"]


def split_controls(
    sources: Sequence[ArgumentSource],
) -> Tuple[List[ArgumentSource], Dict[str, ArgumentSource]]:
    """
    Separate control fields (names starting with ".") from arguments.

    :param sources: All fields of the request body.
    :raise ArgumentError: For unknown control fields.
    :return: Tuple (arguments, control fields by name).
    """
    arguments, controls = [], {}
    for source in sources:
        if not source.name.startswith("."):
            arguments.append(source)
        elif source.name == SEED_FIELD:
            controls[source.name] = source
        else:
            raise ArgumentError(source.name, "unknown control field")
    return arguments, controls


def parse_seed(source: Optional[ArgumentSource]) -> Optional[int]:
    """
    Read the .seed control field.

    :param source: The field, None if absent.
    :raise ArgumentError: If the seed is not a non-negative integer.
    :return: The seed or None.
    """
    if source is None:
        return None
    raw = source.raw
    if isinstance(raw, bool):
        raise ArgumentError(SEED_FIELD, "seed must be an integer")
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", "replace").strip()
    try:
        seed = int(raw)
    except (TypeError, ValueError):
        raise ArgumentError(SEED_FIELD, "seed must be an integer")
    if seed < 0:
        raise ArgumentError(SEED_FIELD, "seed must be a non-negative integer")
    return seed


class Gateway:
    """
    The request handlers over one library, session store and runner.
    """

    def __init__(
        self,
        config: ServerConfig,
        library: PackageLibrary,
        sessions: SessionStore,
        runner: RpcRunner,
    ) -> None:
        self.config = config
        self.root = config.root_prefix
        self.library = library
        self.sessions = sessions
        self.runner = runner

    def _format(
        self, resource: Resource, routed: Route
    ) -> Optional[ExportFormat]:
        if routed.format_id is not None:
            return ExportFormatFactory.get(routed.format_id, routed.params)
        if routed.params and resource.kind != ResourceKind.FILE:
            default = DEFAULT_FORMATS[resource.kind]
            return ExportFormatFactory.get(default, routed.params)
        return None

    def handle_get(self, routed: Route) -> ApiResponse:
        """
        Export the addressed resource.

        :param routed: The route of the request.
        :raise GatewayError: Not found, redirects and format errors.
        :return: The response.
        """
        if routed.action == ROOT:
            resource = Resource(ResourceKind.LISTING, "", ["library/"])
        elif routed.action == PACKAGES:
            resource = Resource(
                ResourceKind.LISTING, "library", self.library.names()
            )
        else:
            path = routed.path
            container = load_container(
                self.library, self.sessions, path.library, path.container
            )
            try:
                resource = resolve_resource(container, path)
            except NotFoundError:
                if routed.fallback_format is None:
                    raise
                routed = routed.formatted()
                path = routed.path
                resource = resolve_resource(container, path)
            if (
                resource.kind == ResourceKind.LISTING
                and path.segments
                and not path.trailing_slash
                and routed.format_id is None
            ):
                raise Redirect(path.url(self.root) + "/")
        body, media_type = export(resource, self._format(resource, routed))
        return ApiResponse(200, body, media_type)

    def created(self, key: SessionKey) -> ApiResponse:
        """
        The 201 response for a new session.

        :param key: The session key.
        :return: Response with Location header and the resource list.
        """
        container = self.sessions.load(str(key))
        body = "".join(
            f"{path}\n" for path in session_paths(container, self.root)
        )
        return ApiResponse(
            201,
            body.encode(),
            headers={"Location": f"{self.root}/tmp/{key}/"},
        )

    def handle_rpc(
        self,
        routed: Route,
        sources: Sequence[ArgumentSource],
        budget: Optional[Budget] = None,
    ) -> ApiResponse:
        """
        Run the RPC a POST request stands for.

        :param routed: The route of the request.
        :param sources: All fields of the request body.
        :param budget: Budget of the request, cancelled on timeout.
        :raise GatewayError: Argument, evaluation and budget errors.
        :return: The 201 response.
        """
        arguments, controls = split_controls(sources)
        seed = parse_seed(controls.get(SEED_FIELD))
        if routed.action == REPLAY:
            if arguments or controls:
                raise ArgumentError(
                    arguments[0].name if arguments else SEED_FIELD,
                    "replay takes no arguments",
                )
            key = self.runner.replay(routed.path.container, budget)
        elif routed.action == RUN:
            target, arguments = self._uploaded_script(arguments)
            key = self.runner.run(target, arguments, seed, budget)
        else:
            target = self.runner.resolve_target(routed.path)
            key = self.runner.run(target, arguments, seed, budget)
        return self.created(key)

    @staticmethod
    def _uploaded_script(arguments: Sequence[ArgumentSource]):
        scripts = [
            source
            for source in arguments
            if source.name == SCRIPT_FIELD
            and source.origin == ArgumentOrigin.MULTIPART_FILE
        ]
        if not scripts:
            raise ArgumentError(SCRIPT_FIELD, "a script upload is required")
        upload = scripts[0]
        if not upload.filename.lower().endswith(".r"):
            raise ArgumentError(SCRIPT_FIELD, "only .r scripts can be run")
        try:
            script = upload.raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ArgumentError(SCRIPT_FIELD, "script is not valid UTF-8")
        name = upload.filename.replace("\\", "/").rsplit("/", 1)[-1]
        rest = [source for source in arguments if source is not upload]
        return RpcTarget(SCRIPT, name, script=script), rest
