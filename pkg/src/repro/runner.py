"""
Execution of RPCs and of their replays.

Every RPC runs in a fresh evaluation context inside a temporary working
directory. Its outputs, the call record and the evaluation statistics are
saved as a new session; nothing is stored when the RPC fails.
"""

import hashlib
import os
import secrets
import tempfile
import threading
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.errors import (
    ArgumentError,
    GatewayError,
    LangError,
    MethodNotAllowed,
    NotFoundError,
    ResourceError,
)
from src.formats.arguments import (
    ArgumentSource,
    ImportedArgument,
    import_argument,
)
from src.lang.context import Budget, EvalContext
from src.lang.deparse import deparse_call
from src.lang.evaluator import (
    VALUE_NAME,
    as_gateway_error,
    call_function,
    run_script,
)
from src.repro.call_record import CallRecord, RecordedArgument
from src.repro.console import build_console, call_console
from src.store.config import ServerConfig
from src.store.library import PackageLibrary, load_container
from src.store.session_store import SessionOutputs, SessionStore, read_files
from src.utils.logging import EvaluationLogger
from src.values.container import RESERVED, ResourceKind, resolve_resource
from src.values.keys import SessionKey, SplitMix64
from src.values.paths import ResourcePath
from src.values.value import Function, Value

FUNCTION_CALL = "function-call"
SCRIPT = "script"
SCRIPT_EXTENSION = ".r"


class SeedSource:
    """
    Draws the seeds of RPCs that do not fix one. Reproducible when created
    with a seed, backed by the secure random source otherwise.
    """

    def __init__(self, seed: Optional[int] = None) -> None:
        self.stream = None if seed is None else SplitMix64(seed)
        self.lock = threading.Lock()

    def draw(self) -> int:
        """
        Draw a seed.

        :return: A non-negative 31 bit integer.
        """
        if self.stream is None:
            return secrets.randbits(31)
        with self.lock:
            return self.stream.next() >> 33


class RpcTarget:
    """
    What an RPC executes: a function object or the text of a script.
    """

    def __init__(
        self,
        kind: str,
        name: str,
        path: Optional[ResourcePath] = None,
        function: Optional[Function] = None,
        script: Optional[str] = None,
        readonly_roots: Sequence[str] = (),
    ) -> None:
        """
        Create the target.

        :param kind: function-call or script.
        :param name: The object name or the script file name.
        :param path: Where the target lives, None for uploaded scripts.
        :param function: The function for function calls.
        :param script: The script text for scripts.
        :param readonly_roots: Directories the code may read files from.
        """
        self.kind = kind
        self.name = name
        self.path = path
        self.function = function
        self.script = script
        self.readonly_roots = tuple(readonly_roots)

    @property
    def uploaded(self) -> bool:
        return self.path is None

    def to_dict(self) -> Dict[str, Optional[str]]:
        if self.path is None:
            return {"library": None, "container": None, "path": self.name}
        return {
            "library": self.path.library,
            "container": self.path.container,
            "path": self.path.relative,
        }

    def __repr__(self) -> str:
        where = self.path.relative if self.path else "upload"
        return f"<RpcTarget {self.kind} {self.name} ({where})>"


def _digest(content: bytes) -> str:
    return hashlib.sha256(content).hexdigest()


class RpcRunner:
    """
    Executes RPCs against the package library and the session store.
    """

    def __init__(
        self,
        config: ServerConfig,
        library: PackageLibrary,
        sessions: SessionStore,
    ) -> None:
        """
        Create the runner.

        :param config: Budgets and the deterministic seed, if any.
        :param library: The package library.
        :param sessions: The session store receiving the results.
        """
        self.config = config
        self.library = library
        self.sessions = sessions
        self.seeds = SeedSource(config.deterministic_seed)

    def budget(self) -> Budget:
        """
        Start the budget of a new RPC.

        :return: A budget with the configured timeout and cell limit.
        """
        return Budget(self.config.timeout, self.config.cell_limit)

    def resolve_target(self, path: ResourcePath) -> RpcTarget:
        """
        Resolve the target of a POST request.

        :param path: The resource path of the request.
        :raise NotFoundError: If nothing exists at the path.
        :raise LangError: For objects that are not functions and files
            that are not .r scripts.
        :raise MethodNotAllowed: For any other resource.
        :return: The target.
        """
        container = load_container(
            self.library, self.sessions, path.library, path.container
        )
        resource = resolve_resource(container, path)
        if resource.kind == ResourceKind.OBJECT:
            if not isinstance(resource.value, Function):
                raise LangError(
                    "eval", f"object '{resource.name}' is not a function"
                )
            return RpcTarget(
                FUNCTION_CALL, resource.name, path, function=resource.value
            )
        if resource.kind == ResourceKind.FILE:
            name = path.segments[-1]
            if not name.lower().endswith(SCRIPT_EXTENSION):
                raise LangError(
                    "eval",
                    f"file '{path.relative}' is not a script, only .r "
                    "files can be executed",
                )
            try:
                script = resource.value.decode("utf-8")
            except UnicodeDecodeError:
                raise LangError("parse", "script is not valid UTF-8")
            return RpcTarget(
                SCRIPT,
                name,
                path,
                script=script,
                readonly_roots=self._roots(path),
            )
        raise MethodNotAllowed(
            f"POST is not applicable to the {resource.kind.value} "
            f'"{path.relative}"'
        )

    def _roots(self, path: ResourcePath) -> List[str]:
        if path.library == "library":
            record = self.library.packages.get(path.container)
            return [record.loaded_from] if record is not None else []
        return [os.path.join(self.sessions.root, path.container, "files")]

    def import_arguments(
        self,
        sources: Sequence[ArgumentSource],
        budget: Budget,
        workdir: str,
        seed: int,
    ) -> List[ImportedArgument]:
        """
        Import the arguments of a request.

        :param sources: The raw arguments.
        :param budget: Budget charged by code arguments.
        :param workdir: Working directory receiving uploads.
        :param seed: Seed of the argument evaluation contexts.
        :raise ArgumentError: For duplicate names and failing arguments.
        :return: The imported arguments in request order.
        """
        arguments = []
        seen = set()
        for source in sources:
            if source.name in seen:
                raise ArgumentError(source.name, "given more than once")
            seen.add(source.name)
            arguments.append(
                import_argument(
                    source, self.sessions.load, budget, workdir, seed
                )
            )
        return arguments

    def run(
        self,
        target: RpcTarget,
        sources: Sequence[ArgumentSource] = (),
        seed: Optional[int] = None,
        budget: Optional[Budget] = None,
    ) -> SessionKey:
        """
        Execute an RPC and store its outputs.

        :param target: The function or script to execute.
        :param sources: The raw arguments of the request.
        :param seed: Seed fixed by the client, drawn if None.
        :param budget: The budget, a fresh one if None.
        :raise GatewayError: For argument, evaluation and budget errors.
        :return: The key of the new session.
        """
        seed = self.seeds.draw() if seed is None else seed
        budget = budget or self.budget()
        with tempfile.TemporaryDirectory(prefix="statgate-") as workdir:
            if target.uploaded:
                self._write(workdir, target.name, target.script.encode())
            arguments = self.import_arguments(sources, budget, workdir, seed)
            return self._execute(target, arguments, seed, budget, workdir)

    def replay(self, key: str, budget: Optional[Budget] = None) -> SessionKey:
        """
        Execute the recorded call of a session again with its recorded
        seed and argument snapshots. The original session is not touched.

        :param key: Key of the session to replay.
        :param budget: The budget, a fresh one if None.
        :raise NotFoundError: If the session, its record, the target or an
            uploaded file is gone.
        :raise GatewayError: Re-execution errors, as for any RPC.
        :return: The key of the new session.
        """
        original = self.sessions.load(key)
        record = CallRecord.from_dict(self.sessions.call_record(key))
        target = self._recorded_target(record)
        budget = budget or self.budget()
        with tempfile.TemporaryDirectory(prefix="statgate-") as workdir:
            if target.uploaded:
                self._write(workdir, target.name, target.script.encode())
            arguments = []
            for recorded in record.args:
                if recorded.kind == "file":
                    content = original.files.get(recorded.reference)
                    if content is None or _digest(content) != recorded.digest:
                        raise NotFoundError(
                            f'uploaded file "{recorded.reference}" of '
                            f"session {key} is missing or changed"
                        )
                    self._write(workdir, recorded.reference, content)
                arguments.append(
                    ImportedArgument(
                        recorded.name,
                        recorded.value(),
                        recorded.kind,
                        recorded.reference,
                        recorded.digest,
                    )
                )
            return self._execute(
                target, arguments, record.seed, budget, workdir
            )

    def _recorded_target(self, record: CallRecord) -> RpcTarget:
        target = record.target
        if target["library"] is None:
            return RpcTarget(SCRIPT, target["path"], script=record.source)
        path = ResourcePath(
            target["library"],
            target["container"],
            target["path"].split("/"),
        )
        resolved = self.resolve_target(path)
        if resolved.kind == SCRIPT:
            resolved.script = record.source
        return resolved

    @staticmethod
    def _write(workdir: str, name: str, content: bytes) -> None:
        path = os.path.join(workdir, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "wb") as handle:
            handle.write(content)

    def _execute(
        self,
        target: RpcTarget,
        arguments: List[ImportedArgument],
        seed: int,
        budget: Budget,
        workdir: str,
    ) -> SessionKey:
        logger = EvaluationLogger()
        logger.log_start(
            {"kind": target.kind, "target": target.to_dict(), "seed": seed}
        )
        ctx = EvalContext(
            seed=seed,
            budget=budget,
            workdir=workdir,
            readonly_roots=target.readonly_roots,
            logger=logger,
        )
        pairs = [(argument.name, argument.value) for argument in arguments]
        if target.kind == FUNCTION_CALL:
            source = deparse_call(target.name, pairs)
        else:
            source = target.script
        try:
            if target.kind == FUNCTION_CALL:
                namespace = {VALUE_NAME: self._call(target, pairs, ctx)}
                console = call_console(source, ctx.output())
            else:
                ctx.namespace.update(pairs)
                run_script(source, ctx)
                namespace = ctx.namespace
                console = build_console(source, ctx.transcript)
        except LangError as error:
            _attach_console(error, target, source, ctx)
            raise
        files = read_files(workdir)
        _check_file_names(files)
        logger.log_end({"outcome": "ok", "cells_used": budget.cells_used})
        record = CallRecord(
            target.kind,
            target.to_dict(),
            source,
            [RecordedArgument.from_imported(item) for item in arguments],
            seed,
        )
        warnings = "".join(f"{message}\n" for message in ctx.warnings)
        outputs = SessionOutputs(
            namespace,
            ctx.device.recordings(),
            files,
            source,
            ctx.output(),
            console,
            warnings or None,
            seed,
            record.to_dict(),
            logger,
        )
        budget.check()
        return self.sessions.save(outputs, budget.check)

    @staticmethod
    def _call(
        target: RpcTarget,
        pairs: Sequence[Tuple[str, Value]],
        ctx: EvalContext,
    ) -> Value:
        try:
            return call_function(target.function, pairs, ctx)
        except GatewayError:
            raise
        except Exception as error:
            raise as_gateway_error(error) from error


def _attach_console(
    error: LangError, target: RpcTarget, source: str, ctx: EvalContext
) -> None:
    """
    Attach the console transcript up to the failure to an evaluation
    error, so the error response shows where the call stopped. Budget
    errors and scripts that never started keep the bare message.

    :param error: The error raised by the evaluation.
    :param target: The executed target.
    :param source: The call text or the script text.
    :param ctx: The evaluation context of the failed call.
    """
    if isinstance(error, ResourceError):
        return
    if target.kind == FUNCTION_CALL:
        error.console = call_console(source, ctx.output(), str(error))
    elif ctx.transcript:
        error.console = build_console(source, ctx.transcript)


def _check_file_names(files: Mapping[str, bytes]) -> None:
    """
    Reject files whose name would be shadowed by a section of the session.

    :param files: Relative path to content mapping of the working directory.
    :raise LangError: For a reserved top level name.
    """
    for path in sorted(files):
        head = path.split("/", 1)[0]
        if head in RESERVED:
            raise LangError(
                "eval",
                f"file name '{path}' is reserved, '{head}' is a section of "
                "every session",
            )
