"""
The session store.

Every session is a directory below the session root whose layout mirrors
the API tree:

    meta.json            created_at, expires_at, seed, version, bytes
    R/<name>.bin         one object per file in the bin format
    graphics/NNN.rec     graphics recordings as canonical json
    files/...            files written or uploaded by the RPC
    source.txt stdout.txt console.txt warnings.txt
    call.json            the call record used for replay
    statistics.json      evaluation statistics, not served

A session is written into a staging directory and published by renaming
it to its key, so readers never see a partial session.
"""

import os
import shutil
import threading
import time
import uuid
from collections import OrderedDict
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterable, Mapping, Optional

from src import __version__
from src.errors import FormatError, NotFoundError, ResourceError
from src.formats.binary import decode_bin, encode_bin, function_loader
from src.formats.json_codec import dump_json, load_json
from src.store.config import LibraryConfig
from src.utils.logging import EvaluationLogger, ServerLogger
from src.values.container import Container, ContainerKind
from src.values.graphics import GraphicsRecording
from src.values.keys import KeyGenerator, SessionKey, is_key, new_session_key
from src.values.value import Value

CACHE_SIZE = 128
STAGING_PREFIX = ".staging-"
TEXT_FILES = {
    "source": "source.txt",
    "stdout": "stdout.txt",
    "console": "console.txt",
    "warnings": "warnings.txt",
}


class SessionOutputs:
    """
    Everything one RPC produced, ready to be stored.
    """

    def __init__(
        self,
        namespace: Mapping[str, Value],
        graphics: Iterable[GraphicsRecording] = (),
        files: Optional[Mapping[str, bytes]] = None,
        source: str = "",
        stdout: str = "",
        console: str = "",
        warnings: Optional[str] = None,
        seed: int = 0,
        call: Optional[Dict[str, Any]] = None,
        statistics: Optional[EvaluationLogger] = None,
    ) -> None:
        """
        Collect the outputs.

        :param namespace: Objects of the session, .val included.
        :param graphics: Graphics recordings in creation order.
        :param files: Relative path to content mapping.
        :param source: Canonical source of the call or the script text.
        :param stdout: Everything printed during evaluation.
        :param console: The console transcript.
        :param warnings: Warning messages, None if there were none.
        :param seed: The seed the evaluation started with.
        :param call: The call record as json compatible dictionary.
        :param statistics: Logger holding the evaluation statistics.
        """
        self.namespace = dict(namespace)
        self.graphics = list(graphics)
        self.files = dict(files or {})
        self.source = source
        self.stdout = stdout
        self.console = console
        self.warnings = warnings
        self.seed = seed
        self.call = call
        self.statistics = statistics


class SessionRecord:
    """
    A stored session: its key, the container and the bookkeeping values.
    """

    def __init__(
        self,
        key: str,
        container: Container,
        created_at: float,
        expires_at: float,
        bytes_on_disk: int,
    ) -> None:
        self.key = key
        self.container = container
        self.created_at = created_at
        self.expires_at = expires_at
        self.bytes_on_disk = bytes_on_disk


def _timestamp(seconds: float) -> str:
    moment = datetime.fromtimestamp(seconds, tz=timezone.utc)
    return moment.isoformat(timespec="seconds")


def _payloads(outputs: SessionOutputs) -> Dict[str, bytes]:
    """
    Encode the outputs as relative path to bytes mapping.

    :param outputs: The session outputs.
    :return: File contents of the session directory, meta.json excluded.
    """
    payloads = {}
    for name, value in outputs.namespace.items():
        payloads[f"R/{name}.bin"] = encode_bin(value, allow_functions=True)
    for index, recording in enumerate(outputs.graphics, start=1):
        payloads[f"graphics/{index:03d}.rec"] = dump_json(
            recording.to_dict()
        )
    for path, content in outputs.files.items():
        payloads[f"files/{path}"] = content
    for section, filename in TEXT_FILES.items():
        text = getattr(outputs, section)
        if text is not None:
            payloads[filename] = text.encode("utf-8")
    if outputs.call is not None:
        payloads["call.json"] = dump_json(outputs.call, pretty=True)
    return payloads


class SessionStore:
    """
    Write-through store of session containers with an in-memory cache of
    the most recently used sessions. The store offers no operation
    listing the stored keys.
    """

    def __init__(
        self,
        config: LibraryConfig,
        key_generator: Optional[KeyGenerator] = None,
        clock: Callable[[], float] = time.time,
        logger: Optional[ServerLogger] = None,
    ) -> None:
        """
        Open the store, creating the session root if needed.

        :param config: Location and limits of the store.
        :param key_generator: Entropy for new keys, secure by default.
        :param clock: Source of the current time in seconds.
        :param logger: Optional logger for eviction problems.
        """
        self.config = config
        self.root = os.path.abspath(config.session_root)
        self.key_generator = key_generator
        self.clock = clock
        self.logger = logger
        self.cache: "OrderedDict[str, SessionRecord]" = OrderedDict()
        self.lock = threading.Lock()
        os.makedirs(self.root, exist_ok=True)

    def _directory(self, key: str) -> str:
        return os.path.join(self.root, key)

    def save(
        self,
        outputs: SessionOutputs,
        check: Optional[Callable[[], None]] = None,
    ) -> SessionKey:
        """
        Store the outputs of an RPC as a new session.

        :param outputs: The session outputs.
        :param check: Called right before the session is published, raises
            to discard it, e.g. when the request already timed out.
        :raise ResourceError: If the session exceeds max_session_bytes.
        :raise OSError: If the disk write fails.
        :return: The key, returned only after the session is published.
        """
        payloads = _payloads(outputs)
        size = sum(len(content) for content in payloads.values())
        if size > self.config.max_session_bytes:
            raise ResourceError(
                "session size",
                f"session size of {size} bytes exceeds the limit of "
                f"{self.config.max_session_bytes} bytes",
            )
        created_at = self.clock()
        meta = {
            "created_at": created_at,
            "expires_at": created_at + self.config.ttl,
            "seed": outputs.seed,
            "version": __version__,
            "bytes": size,
        }
        staging = os.path.join(self.root, STAGING_PREFIX + uuid.uuid4().hex)
        try:
            for path, content in payloads.items():
                target = os.path.join(staging, path)
                os.makedirs(os.path.dirname(target), exist_ok=True)
                with open(target, "wb") as handle:
                    handle.write(content)
            with open(os.path.join(staging, "meta.json"), "wb") as handle:
                handle.write(dump_json(meta))
            if outputs.statistics is not None:
                outputs.statistics.save_logs(staging)
            if check is not None:
                check()
            return self._publish(staging)
        except BaseException:
            shutil.rmtree(staging, ignore_errors=True)
            raise

    def _publish(self, staging: str) -> SessionKey:
        while True:
            key = new_session_key(self.key_generator)
            target = self._directory(str(key))
            if os.path.exists(target):
                continue
            try:
                os.rename(staging, target)
            except OSError:
                if os.path.exists(target):
                    continue
                raise
            return key

    def record(self, key: str) -> SessionRecord:
        """
        Load a session with its bookkeeping values.

        :param key: The session key.
        :raise NotFoundError: For malformed, unknown and expired keys.
        :return: The session record.
        """
        if not is_key(key):
            raise NotFoundError(f'Session "{key}" does not exist')
        with self.lock:
            record = self.cache.get(key)
            if record is not None:
                self.cache.move_to_end(key)
        if record is None:
            record = self._read(key)
            with self.lock:
                self.cache[key] = record
                while len(self.cache) > CACHE_SIZE:
                    self.cache.popitem(last=False)
        if record.expires_at <= self.clock():
            raise NotFoundError(f'Session "{key}" does not exist')
        return record

    def load(self, key: str) -> Container:
        """
        Load the container of a session.

        :param key: The session key.
        :raise NotFoundError: For malformed, unknown and expired keys.
        :return: The session container.
        """
        return self.record(key).container

    def call_record(self, key: str) -> Dict[str, Any]:
        """
        Load the stored call record of a session.

        :param key: The session key.
        :raise NotFoundError: If the session or its record does not exist.
        :return: The call record dictionary.
        """
        self.record(key)
        path = os.path.join(self._directory(key), "call.json")
        try:
            with open(path, "rb") as handle:
                return load_json(handle.read())
        except FileNotFoundError:
            raise NotFoundError(f'Session "{key}" has no call record')

    def _read(self, key: str) -> SessionRecord:
        directory = self._directory(key)
        try:
            with open(os.path.join(directory, "meta.json"), "rb") as handle:
                meta = load_json(handle.read())
            return self._read_container(key, directory, meta)
        except FileNotFoundError:
            raise NotFoundError(f'Session "{key}" does not exist')

    def _read_container(
        self, key: str, directory: str, meta: Dict[str, Any]
    ) -> SessionRecord:
        namespace: Dict[str, Value] = {}
        loader = function_loader(namespace)
        objects = os.path.join(directory, "R")
        names = os.listdir(objects) if os.path.isdir(objects) else []
        for filename in sorted(names):
            with open(os.path.join(objects, filename), "rb") as handle:
                namespace[filename[: -len(".bin")]] = decode_bin(
                    handle.read(), loader
                )
        graphics = []
        folder = os.path.join(directory, "graphics")
        if os.path.isdir(folder):
            for filename in sorted(os.listdir(folder)):
                with open(os.path.join(folder, filename), "rb") as handle:
                    graphics.append(
                        GraphicsRecording.from_dict(load_json(handle.read()))
                    )
        texts = {}
        for section, filename in TEXT_FILES.items():
            path = os.path.join(directory, filename)
            if os.path.exists(path):
                with open(path, "rb") as handle:
                    texts[section] = handle.read().decode("utf-8")
        container = Container(
            ContainerKind.SESSION,
            key,
            namespace,
            files=read_files(os.path.join(directory, "files")),
            graphics=graphics,
            meta={
                "created": _timestamp(meta["created_at"]),
                "expires": _timestamp(meta["expires_at"]),
                "seed": meta["seed"],
                "version": meta["version"],
            },
            **texts,
        )
        return SessionRecord(
            key,
            container,
            meta["created_at"],
            meta["expires_at"],
            meta["bytes"],
        )

    def _stored(self) -> Dict[str, Dict[str, Any]]:
        sessions = {}
        for name in os.listdir(self.root):
            if not is_key(name):
                continue
            path = os.path.join(self.root, name, "meta.json")
            try:
                with open(path, "rb") as handle:
                    sessions[name] = load_json(handle.read())
            except (OSError, FormatError) as error:
                self._log_error(name, error)
        return sessions

    def _remove(self, key: str) -> bool:
        with self.lock:
            self.cache.pop(key, None)
        try:
            shutil.rmtree(self._directory(key))
            return True
        except OSError as error:
            self._log_error(key, error)
            return False

    def _log_error(self, key: str, error: Exception) -> None:
        if self.logger is not None:
            self.logger.log_event(
                {
                    "event": "evict",
                    "level": "error",
                    "key": key,
                    "error": error,
                }
            )

    def evict_expired(self, now: Optional[float] = None) -> int:
        """
        Remove expired sessions, then the oldest sessions while more than
        max_sessions remain. Failures are logged and skipped.

        :param now: The current time, the store clock by default.
        :return: Number of removed sessions.
        """
        now = self.clock() if now is None else now
        sessions = self._stored()
        removed = 0
        for key, meta in list(sessions.items()):
            if meta["expires_at"] <= now:
                removed += self._remove(key)
                del sessions[key]
        excess = len(sessions) - self.config.max_sessions
        if excess > 0:
            oldest = sorted(
                sessions, key=lambda key: sessions[key]["created_at"]
            )
            for key in oldest[:excess]:
                removed += self._remove(key)
        for name in os.listdir(self.root):
            if name.startswith(STAGING_PREFIX):
                path = os.path.join(self.root, name)
                if os.path.getmtime(path) + self.config.ttl <= now:
                    shutil.rmtree(path, ignore_errors=True)
        return removed


def read_files(folder: str) -> Dict[str, bytes]:
    """
    Read every file below a folder.

    :param folder: The folder, may be missing.
    :return: Relative path (joined by "/") to content mapping.
    """
    files = {}
    if not os.path.isdir(folder):
        return files
    for directory, _, filenames in os.walk(folder):
        for filename in filenames:
            path = os.path.join(directory, filename)
            relative = os.path.relpath(path, folder).replace(os.sep, "/")
            with open(path, "rb") as handle:
                files[relative] = handle.read()
    return files
