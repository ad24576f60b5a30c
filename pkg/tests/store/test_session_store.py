""" Test storing, loading and evicting sessions. """

import os

import pytest

from src.errors import NotFoundError, ResourceError
from src.lang.parser import parse_single
from src.store.config import LibraryConfig
from src.store.session_store import SessionOutputs, SessionStore
from src.utils.logging import EvaluationLogger, ServerLogger
from src.values.equality import deep_equals, namespaces_equal
from src.values.graphics import DrawCommand, GraphicsRecording
from src.values.keys import DeterministicKeyGenerator, new_session_key
from src.values.value import Builtin, Closure, number, numbers, strings

FIRST_KEY = "xe220a8397b1dcdaf6e7"


class Clock:
    def __init__(self, now: float = 1000.0) -> None:
        self.now = now

    def __call__(self) -> float:
        return self.now


def make_store(tmp_path, clock=None, **kwargs) -> SessionStore:
    config = LibraryConfig(session_root=str(tmp_path / "sessions"), **kwargs)
    return SessionStore(
        config, DeterministicKeyGenerator(0), clock or Clock()
    )


def outputs(**kwargs) -> SessionOutputs:
    values = {"namespace": {".val": number(1)}}
    values.update(kwargs)
    return SessionOutputs(**values)


def test_save_and_load(tmp_path):
    store = make_store(tmp_path)
    recording = GraphicsRecording([DrawCommand("title", string="t")])
    namespace = {
        ".val": numbers([1, None]),
        "names": strings(["a"]),
        "f": Builtin("mean"),
    }
    key = store.save(
        SessionOutputs(
            namespace,
            graphics=[recording],
            files={"out/result.csv": b"a\n1\n"},
            source="f(1)",
            stdout="[1] 1\n",
            console="> f(1)\n[1] 1\n",
            seed=7,
            call={"kind": "function"},
            statistics=EvaluationLogger(),
        )
    )
    assert str(key) == FIRST_KEY
    directory = tmp_path / "sessions" / FIRST_KEY
    assert (directory / "meta.json").is_file()
    assert (directory / "statistics.json").is_file()
    store.cache.clear()
    container = store.load(FIRST_KEY)
    assert namespaces_equal(container.namespace, namespace)
    assert container.graphics == (recording,)
    assert dict(container.files) == {"out/result.csv": b"a\n1\n"}
    assert container.source == "f(1)"
    assert container.stdout == "[1] 1\n"
    assert container.warnings is None
    assert container.meta["seed"] == 7
    assert container.meta["created"] == "1970-01-01T00:16:40+00:00"
    assert store.call_record(FIRST_KEY) == {"kind": "function"}


def test_closures_are_restored(tmp_path):
    store = make_store(tmp_path)
    definition = parse_single("function(x) x + k")
    closure = Closure(definition.params, definition.body, {})
    key = store.save(outputs(namespace={"k": number(2), "f": closure}))
    store.cache.clear()
    restored = store.load(str(key)).namespace["f"]
    assert deep_equals(restored, closure)
    assert deep_equals(restored.env["k"], number(2))


def test_keys_are_unique(tmp_path):
    store = make_store(tmp_path)
    keys = {str(store.save(outputs())) for _ in range(5)}
    assert len(keys) == 5


def test_size_limit(tmp_path):
    store = make_store(tmp_path, max_session_bytes=10)
    with pytest.raises(ResourceError, match="session size"):
        store.save(outputs(stdout="x" * 100))
    assert os.listdir(tmp_path / "sessions") == []


def test_failed_check_discards_the_session(tmp_path):
    store = make_store(tmp_path)

    def expired():
        raise ResourceError("time limit", "time limit of 1 s exceeded")

    with pytest.raises(ResourceError, match="time limit"):
        store.save(outputs(), expired)
    assert os.listdir(tmp_path / "sessions") == []
    assert str(store.save(outputs(), lambda: None)) == FIRST_KEY


def test_missing_sessions(tmp_path):
    clock = Clock()
    store = make_store(tmp_path, clock, ttl=60)
    key = str(store.save(outputs()))
    with pytest.raises(NotFoundError):
        store.load("not-a-key")
    with pytest.raises(NotFoundError):
        store.load("x0000000000000000000")
    with pytest.raises(NotFoundError):
        store.call_record(key)
    clock.now += 60
    with pytest.raises(NotFoundError):
        store.load(key)


def test_unknown_keys_are_not_found(tmp_path):
    store = make_store(tmp_path)
    saved = str(store.save(outputs()))
    for _ in range(10**4):
        key = str(new_session_key())
        if key == saved:
            continue
        with pytest.raises(NotFoundError):
            store.load(key)
    assert store.load(saved).namespace


def test_evict_expired(tmp_path):
    clock = Clock()
    store = make_store(tmp_path, clock, ttl=100)
    old = str(store.save(outputs()))
    clock.now += 50
    new = str(store.save(outputs()))
    assert store.evict_expired(now=1099.0) == 0
    assert store.evict_expired(now=1100.0) == 1
    assert sorted(os.listdir(tmp_path / "sessions")) == [new]
    clock.now = 1100.0
    with pytest.raises(NotFoundError):
        store.load(old)
    assert store.load(new).namespace[".val"] is not None


def test_evict_oldest_beyond_max_sessions(tmp_path):
    clock = Clock()
    store = make_store(tmp_path, clock, max_sessions=2)
    keys = []
    for _ in range(4):
        keys.append(str(store.save(outputs())))
        clock.now += 1
    assert store.evict_expired() == 2
    assert sorted(os.listdir(tmp_path / "sessions")) == sorted(keys[2:])


def test_evict_logs_broken_sessions(tmp_path):
    config = LibraryConfig(session_root=str(tmp_path / "sessions"))
    logger = ServerLogger("ERROR")
    store = SessionStore(config, DeterministicKeyGenerator(0), Clock(), logger)
    broken = tmp_path / "sessions" / FIRST_KEY
    broken.mkdir()
    (broken / "meta.json").write_bytes(b"{")
    assert store.evict_expired() == 0
    assert logger.logs["key"] == [FIRST_KEY]
    assert logger.logs["level"] == ["error"]
