"""
Command line front end: run the server and talk to it.

    python -m src.cli serve --addr 127.0.0.1:8004 --package-root library
    python -m src.cli call /ocpu/library/demo/R/center x='c(1, 2, 3)'
    python -m src.cli get {key}/R/.val/json
    python -m src.cli run analysis.r
    python -m src.cli replay {key}

Client subcommands print the server answer line by line, the session key
alone on the last line of stdout. Errors go to stderr. The exit code
mirrors the HTTP status class: 0 for 2xx, 1 for 4xx, 2 for 5xx and 3 when
the server cannot be reached.
"""

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence, Tuple

import requests

from src import __version__
from src.errors import GatewayError
from src.store.config import ENV_PREFIX, ServerConfig
from src.values.keys import is_key

DEFAULT_SERVER = "http://127.0.0.1:8004"
DEFAULT_ROOT = "/ocpu"
NETWORK_FAILURE = 3
REQUEST_TIMEOUT = 600.0

# flag name, config key, type, help
SERVE_FLAGS = (
    ("--addr", "addr", str, "host:port to bind"),
    ("--root-prefix", "root_prefix", str, "API root prefix, e.g. /ocpu"),
    ("--package-root", "package_root", str, "directory of the packages"),
    ("--session-root", "session_root", str, "directory of the sessions"),
    ("--ttl", "ttl", float, "session lifetime in seconds"),
    ("--max-sessions", "max_sessions", int, "maximum number of sessions"),
    ("--max-session-bytes", "max_session_bytes", int, "session size limit"),
    ("--timeout", "timeout", float, "wall clock seconds per RPC"),
    ("--cell-limit", "cell_limit", int, "value cells per RPC"),
    ("--max-body", "max_body", int, "request body limit in bytes"),
    ("--eviction-interval", "eviction_interval", float, "seconds"),
    ("--deterministic-seed", "deterministic_seed", int, "seed of keys"),
    ("--log-level", "log_level", str, "DEBUG, INFO, WARNING or ERROR"),
)


def exit_code(status: int) -> int:
    """
    Map an HTTP status to the exit code of a client subcommand.

    :param status: The HTTP status code.
    :return: 0 for 2xx and 3xx, 1 for 4xx, 2 otherwise.
    """
    if status < 400:
        return 0
    if status < 500:
        return 1
    return 2


def resolve_url(server: str, root: str, target: str) -> str:
    """
    Build the URL of a target. Absolute paths are taken as they are,
    targets starting with a session key are relative to {root}/tmp/,
    anything else is relative to the API root.

    :param server: Base URL of the server.
    :param root: The API root prefix.
    :param target: The target given on the command line.
    :return: The URL.
    """
    server = server.rstrip("/")
    if target.startswith(("http://", "https://")):
        return target
    if target.startswith("/"):
        return server + target
    if is_key(target.split("/", 1)[0]):
        return f"{server}{root}/tmp/{target}"
    return f"{server}{root}/{target}"


def parse_fields(pairs: Sequence[str]) -> List[Tuple[str, str]]:
    """
    Split name=value arguments.

    :param pairs: Arguments of the form name=value.
    :raise ValueError: If an argument has no "=" or an empty name.
    :return: List of (name, value) in the given order.
    """
    fields = []
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ValueError(
                f'Argument "{pair}" must have the form name=value!'
            )
        fields.append((name, value))
    return fields


def session_key(response: requests.Response) -> Optional[str]:
    location = response.headers.get("Location", "")
    parts = [part for part in location.split("/") if part]
    return parts[-1] if parts and is_key(parts[-1]) else None


def report(response: requests.Response) -> int:
    """
    Print the answer to an RPC: the resource list, then the key.

    :param response: The response of the POST.
    :return: The exit code.
    """
    if response.status_code >= 400:
        sys.stderr.write(response.text)
        return exit_code(response.status_code)
    sys.stdout.write(response.text)
    key = session_key(response)
    if key is not None:
        print(key)
    return exit_code(response.status_code)


def _post(url: str, **kwargs) -> int:
    response = requests.post(url, timeout=REQUEST_TIMEOUT, **kwargs)
    return report(response)


def command_call(args: argparse.Namespace) -> int:
    url = resolve_url(args.server, args.root_prefix, args.target)
    if args.json is not None:
        body = json.loads(args.json)
        if not isinstance(body, dict):
            raise ValueError("The --json body must be a json object!")
        if args.seed is not None:
            body[".seed"] = args.seed
        return _post(url, json=body)
    fields = parse_fields(args.fields)
    if args.seed is not None:
        fields.append((".seed", str(args.seed)))
    return _post(url, data=fields)


def command_run(args: argparse.Namespace) -> int:
    url = resolve_url(args.server, args.root_prefix, "run")
    fields = parse_fields(args.fields)
    if args.seed is not None:
        fields.append((".seed", str(args.seed)))
    with open(args.script, "rb") as handle:
        files = {"file": (os.path.basename(args.script), handle.read())}
    return _post(url, data=fields, files=files)


def command_replay(args: argparse.Namespace) -> int:
    key = args.key.strip("/")
    url = resolve_url(args.server, args.root_prefix, f"{key}/replay")
    return _post(url)


def command_get(args: argparse.Namespace) -> int:
    url = resolve_url(args.server, args.root_prefix, args.target)
    response = requests.get(url, timeout=REQUEST_TIMEOUT)
    if response.status_code >= 400:
        sys.stderr.write(response.text)
        return exit_code(response.status_code)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(response.content)
    else:
        sys.stdout.buffer.write(response.content)
        sys.stdout.flush()
    return exit_code(response.status_code)


def command_serve(args: argparse.Namespace) -> int:
    # The client subcommands run without the server stack.
    import uvicorn

    from src.api.app import create_app

    overrides = {key: getattr(args, key) for _, key, _, _ in SERVE_FLAGS}
    try:
        config = ServerConfig.from_env(overrides)
        app = create_app(config)
    except (ValueError, GatewayError) as error:
        sys.stderr.write(f"statgate: {error}\n")
        return 1
    uvicorn.run(
        app,
        host=config.host,
        port=config.port,
        log_level=config.log_level.lower(),
    )
    return 0


def _client_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--server",
        default=os.environ.get(ENV_PREFIX + "SERVER", DEFAULT_SERVER),
        help="base URL of the server (env STATGATE_SERVER)",
    )
    parser.add_argument(
        "--root-prefix",
        default=os.environ.get(ENV_PREFIX + "ROOT_PREFIX", DEFAULT_ROOT),
        help="API root prefix (env STATGATE_ROOT_PREFIX)",
    )


def build_parser() -> argparse.ArgumentParser:
    """
    Build the parser of all subcommands.

    :return: The argument parser.
    """
    parser = argparse.ArgumentParser(
        prog="statgate",
        description="HTTP gateway for an embedded statistics language.",
    )
    parser.add_argument(
        "--version", action="version", version=f"statgate {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    serve = commands.add_parser("serve", help="run the server")
    for flag, key, kind, text in SERVE_FLAGS:
        serve.add_argument(flag, dest=key, type=kind, default=None, help=text)
    serve.set_defaults(handler=command_serve)

    call = commands.add_parser("call", help="call a function or script")
    call.add_argument("target", help="path of the function or .r file")
    call.add_argument("fields", nargs="*", help="arguments as name=value")
    call.add_argument("--json", default=None, help="json object body")
    call.add_argument("--seed", type=int, default=None, help="RNG seed")
    _client_options(call)
    call.set_defaults(handler=command_call)

    get = commands.add_parser("get", help="fetch a resource")
    get.add_argument("target", help="resource path, e.g. {key}/R/.val/json")
    get.add_argument("--out", default=None, help="write the body to a file")
    _client_options(get)
    get.set_defaults(handler=command_get)

    run = commands.add_parser("run", help="upload and run a .r script")
    run.add_argument("script", help="local .r file")
    run.add_argument("fields", nargs="*", help="arguments as name=value")
    run.add_argument("--seed", type=int, default=None, help="RNG seed")
    _client_options(run)
    run.set_defaults(handler=command_run)

    replay = commands.add_parser("replay", help="replay a session")
    replay.add_argument("key", help="session key")
    _client_options(replay)
    replay.set_defaults(handler=command_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line front end.

    :param argv: Arguments without the program name, sys.argv by default.
    :return: The exit code.
    """
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except requests.RequestException as error:
        sys.stderr.write(f"statgate: cannot reach the server: {error}\n")
        return NETWORK_FAILURE
    except (OSError, ValueError) as error:
        sys.stderr.write(f"statgate: {error}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
