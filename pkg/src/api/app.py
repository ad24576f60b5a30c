"""
The FastAPI application. A single catch-all route hands every request to
the router, so the URL grammar lives in one place and unknown methods get
a 405 instead of the framework's default answer.
"""

import asyncio
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from typing import Callable, List, Optional
from urllib.parse import parse_qsl

from fastapi import FastAPI, Request
from fastapi.responses import Response
from starlette.datastructures import UploadFile

from src import __version__
from src.api.errors import map_error
from src.api.handlers import ApiResponse, Gateway
from src.api.routing import route
from src.errors import (
    ArgumentError,
    FormatError,
    GatewayError,
    PayloadTooLarge,
    ResourceError,
    UnsupportedMediaType,
)
from src.formats.arguments import ArgumentOrigin, ArgumentSource
from src.formats.json_codec import load_json
from src.repro.runner import RpcRunner
from src.store.config import ServerConfig
from src.store.eviction import EvictionThread
from src.store.library import PackageLibrary
from src.store.session_store import SessionStore
from src.utils.logging import ServerLogger
from src.values.keys import DeterministicKeyGenerator, KeyGenerator

ALL_METHODS = ["GET", "POST", "PUT", "DELETE", "PATCH", "OPTIONS", "HEAD"]
URLENCODED = "application/x-www-form-urlencoded"
MULTIPART = "multipart/form-data"
JSON = "application/json"
# Seconds the request waits beyond the budget before answering 503.
TIMEOUT_GRACE = 0.5
WORKERS = 64


def _media_type(request: Request) -> str:
    header = request.headers.get("content-type", "")
    return header.split(";", 1)[0].strip().lower()


async def read_body(request: Request, max_body: int) -> bytes:
    """
    Read the request body within the size limit.

    :param request: The request.
    :param max_body: Maximum body size in bytes.
    :raise PayloadTooLarge: If the body is larger.
    :return: The body.
    """
    declared = request.headers.get("content-length", "")
    if declared.isdigit() and int(declared) > max_body:
        raise PayloadTooLarge(
            f"request body of {declared} bytes exceeds {max_body} bytes"
        )
    body = await request.body()
    if len(body) > max_body:
        raise PayloadTooLarge(
            f"request body of {len(body)} bytes exceeds {max_body} bytes"
        )
    return body


async def parse_arguments(
    request: Request, body: bytes
) -> List[ArgumentSource]:
    """
    Turn the body of a POST request into argument sources.

    :param request: The request, used for its content type and forms.
    :param body: The body, already read.
    :raise UnsupportedMediaType: For content types other than urlencoded,
        multipart and json.
    :raise ArgumentError: For malformed bodies.
    :return: The fields in body order.
    """
    media_type = _media_type(request)
    if not body.strip():
        return []
    if media_type == URLENCODED:
        try:
            fields = parse_qsl(
                body.decode("utf-8"),
                keep_blank_values=True,
                strict_parsing=True,
            )
        except (UnicodeDecodeError, ValueError):
            raise ArgumentError("body", "malformed urlencoded body")
        return [
            ArgumentSource(ArgumentOrigin.URLENCODED, name, value.encode())
            for name, value in fields
        ]
    if media_type == MULTIPART:
        return await _multipart(request)
    if media_type == JSON:
        try:
            data = load_json(body)
        except FormatError as error:
            raise ArgumentError("body", str(error))
        if not isinstance(data, dict):
            raise ArgumentError("body", "a json body must be an object")
        return [
            ArgumentSource(ArgumentOrigin.JSON_FIELD, name, value)
            for name, value in data.items()
        ]
    raise UnsupportedMediaType(
        f'content type "{media_type or "none"}" is not supported, use '
        f"{URLENCODED}, {MULTIPART} or {JSON}"
    )


async def _multipart(request: Request) -> List[ArgumentSource]:
    try:
        form = await request.form()
    except Exception as error:
        raise ArgumentError("body", f"malformed multipart body: {error}")
    sources = []
    for name, item in form.multi_items():
        if isinstance(item, UploadFile):
            content = await item.read()
            sources.append(
                ArgumentSource(
                    ArgumentOrigin.MULTIPART_FILE,
                    name,
                    content,
                    item.filename or name,
                )
            )
        else:
            sources.append(
                ArgumentSource(
                    ArgumentOrigin.MULTIPART_FIELD, name, item.encode()
                )
            )
    await form.close()
    return sources


def _response(result: ApiResponse) -> Response:
    return Response(
        content=result.body,
        status_code=result.status,
        headers=result.headers,
        media_type=result.content_type,
    )


def _error_response(error: BaseException) -> Response:
    status, body, headers = map_error(error)
    return Response(
        content=body.encode(),
        status_code=status,
        headers=headers,
        media_type="text/plain; charset=utf-8",
    )


def create_app(
    config: ServerConfig,
    logger: Optional[ServerLogger] = None,
    key_generator: Optional[KeyGenerator] = None,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    """
    Build the application: load the packages, open the session store and
    wire the request handlers.

    :param config: The server configuration.
    :param logger: Server logger, one is created if None.
    :param key_generator: Session key source, derived from the config if
        None.
    :param clock: Time source of the session store.
    :raise LoadError: If a package fails to load.
    :return: The application. Eviction runs while it is served.
    """
    logger = logger or ServerLogger(config.log_level)
    if key_generator is None and config.deterministic_seed is not None:
        key_generator = DeterministicKeyGenerator(config.deterministic_seed)
    library = PackageLibrary(config.library_config(), logger)
    library.reload()
    sessions = SessionStore(
        config.library_config(), key_generator, clock, logger
    )
    runner = RpcRunner(config, library, sessions)
    gateway = Gateway(config, library, sessions, runner)
    executor = ThreadPoolExecutor(
        max_workers=WORKERS, thread_name_prefix="statgate-rpc"
    )

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        eviction = EvictionThread(sessions, config.eviction_interval, logger)
        eviction.start()
        logger.log_start(
            {
                "version": __version__,
                "addr": config.addr,
                "root": config.root_prefix,
                "packages": len(library.names()),
            }
        )
        yield
        eviction.stop()
        executor.shutdown(wait=False, cancel_futures=True)
        logger.log_end({"sessions": len(sessions.cache)})

    app = FastAPI(
        title="statgate",
        version=__version__,
        docs_url=None,
        redoc_url=None,
        openapi_url=None,
        lifespan=lifespan,
    )
    app.state.config = config
    app.state.library = library
    app.state.sessions = sessions
    app.state.gateway = gateway

    async def in_thread(function, *args):
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(executor, function, *args)

    async def dispatch(request: Request) -> Response:
        routed = route(
            request.method,
            request.scope["path"],
            config.root_prefix,
            dict(request.query_params),
            request.url.query,
        )
        if request.method == "GET":
            return _response(await in_thread(gateway.handle_get, routed))
        body = await read_body(request, config.max_body)
        sources = await parse_arguments(request, body)
        budget = runner.budget()
        try:
            result = await asyncio.wait_for(
                in_thread(gateway.handle_rpc, routed, sources, budget),
                config.timeout + TIMEOUT_GRACE,
            )
        except asyncio.TimeoutError:
            budget.cancel()
            raise ResourceError(
                "time limit", f"time limit of {config.timeout:g} s exceeded"
            )
        return _response(result)

    @app.api_route("/{path:path}", methods=ALL_METHODS)
    async def catch_all(request: Request) -> Response:
        started = time.monotonic()
        try:
            response = await dispatch(request)
        except GatewayError as error:
            response = _error_response(error)
        except Exception as error:
            logger.log_event(
                {"event": "crash", "level": "error", "error": repr(error)}
            )
            response = _error_response(error)
        logger.log_event(
            {
                "event": "request",
                "method": request.method,
                "path": request.scope["path"],
                "status": response.status_code,
                "seconds": round(time.monotonic() - started, 4),
            }
        )
        return response

    return app
