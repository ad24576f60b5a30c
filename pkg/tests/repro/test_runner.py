""" Test running RPCs and replaying sessions. """

import os
import threading

import pytest

from src.errors import (
    ArgumentError,
    LangError,
    MethodNotAllowed,
    NotFoundError,
    ResourceError,
)
from src.formats.arguments import ArgumentOrigin, ArgumentSource
from src.lang.evaluator import VALUE_NAME
from src.repro.runner import (
    FUNCTION_CALL,
    SCRIPT,
    RpcRunner,
    RpcTarget,
    SeedSource,
)
from src.store.config import ServerConfig
from src.store.library import PackageLibrary
from src.store.session_store import SessionStore
from src.values.equality import deep_equals
from src.values.keys import DeterministicKeyGenerator
from src.values.paths import ResourcePath
from src.values.value import numbers

LIBRARY = os.path.join(os.path.dirname(__file__), "..", "..", "library")


@pytest.fixture
def runner(tmp_path):
    return make_runner(tmp_path)


def make_runner(tmp_path, **kwargs) -> RpcRunner:
    config = ServerConfig(
        package_root=LIBRARY,
        session_root=str(tmp_path / "sessions"),
        deterministic_seed=0,
        **kwargs,
    )
    library = PackageLibrary(config.library_config())
    library.reload()
    sessions = SessionStore(
        config.library_config(), DeterministicKeyGenerator(0)
    )
    return RpcRunner(config, library, sessions)


def demo(*segments: str) -> ResourcePath:
    return ResourcePath("library", "demo", segments)


def field(name: str, text: str) -> ArgumentSource:
    return ArgumentSource(ArgumentOrigin.URLENCODED, name, text.encode())


def test_seed_source():
    assert SeedSource(0).draw() == 0x7110541C
    first, second = SeedSource(5), SeedSource(5)
    assert [first.draw() for _ in range(3)] == [
        second.draw() for _ in range(3)
    ]
    assert 0 <= SeedSource().draw() < 2**31


def test_resolve_targets(runner):
    target = runner.resolve_target(demo("R", "center"))
    assert (target.kind, target.name) == (FUNCTION_CALL, "center")
    assert target.to_dict() == {
        "library": "library",
        "container": "demo",
        "path": "R/center",
    }
    script = runner.resolve_target(demo("scripts", "analysis.r"))
    assert script.kind == SCRIPT
    assert script.script.startswith("# Summary of the cats data")
    assert script.readonly_roots == (os.path.abspath(f"{LIBRARY}/demo"),)


@pytest.mark.parametrize(
    "segments, error",
    [
        (("R", "collinear_y"), LangError),
        (("NEWS",), LangError),
        (("data", "cats"), MethodNotAllowed),
        (("man", "center"), MethodNotAllowed),
        (("R", "missing"), NotFoundError),
    ],
)
def test_invalid_targets(runner, segments, error):
    with pytest.raises(error):
        runner.resolve_target(demo(*segments))


def test_function_call(runner):
    target = runner.resolve_target(demo("R", "center"))
    key = runner.run(target, [field("x", "c(1, 2, 3)")], seed=3)
    container = runner.sessions.load(str(key))
    assert list(container.namespace) == [VALUE_NAME]
    assert deep_equals(container.namespace[VALUE_NAME], numbers([-1, 0, 1]))
    assert container.source == "center(x = c(1, 2, 3))"
    assert container.console == "> center(x = c(1, 2, 3))\n"
    assert container.stdout == ""
    assert container.warnings is None
    assert container.meta["seed"] == 3
    record = runner.sessions.call_record(str(key))
    assert record["kind"] == FUNCTION_CALL
    assert record["args"][0]["reference"] == "c(1, 2, 3)"


def test_output_and_warnings(runner):
    marker = runner.resolve_target(demo("R", "marker"))
    key = runner.run(marker, [field("label", '"a"')])
    container = runner.sessions.load(str(key))
    assert container.stdout == '[1] "marker a"\n'
    mean = runner.resolve_target(demo("R", "mean"))
    key = runner.run(mean, [field("x", "numeric(0)")])
    container = runner.sessions.load(str(key))
    assert container.warnings == "mean of an empty vector is NaN\n"


def test_package_script(runner):
    target = runner.resolve_target(demo("scripts", "analysis.r"))
    key = runner.run(target)
    container = runner.sessions.load(str(key))
    assert container.stdout == "[1] 2.616667\n"
    assert len(container.graphics) == 1
    assert container.namespace["cats"].nrow == 6
    assert container.console.startswith("> # Summary of the cats data\n")


def test_uploaded_script_with_file(runner, tmp_path):
    target = RpcTarget(
        SCRIPT, "count.r", script="d <- read_csv(data)\nnrow(d)\n"
    )
    upload = ArgumentSource(
        ArgumentOrigin.MULTIPART_FILE, "data", b"a\n1\n2\n", "in.csv"
    )
    key = str(runner.run(target, [upload]))
    container = runner.sessions.load(key)
    assert deep_equals(container.namespace[VALUE_NAME], numbers([2]))
    assert set(container.files) == {"count.r", "in.csv"}
    replayed = runner.sessions.load(str(runner.replay(key)))
    assert deep_equals(
        replayed.namespace[VALUE_NAME], container.namespace[VALUE_NAME]
    )
    stored = tmp_path / "sessions" / key / "files" / "in.csv"
    stored.write_bytes(b"a\n1\n")
    runner.sessions.cache.clear()
    with pytest.raises(NotFoundError, match="missing or changed"):
        runner.replay(key)


def test_replay_reproduces_random_results(runner):
    noise = runner.resolve_target(demo("R", "noise"))
    key = str(runner.run(noise, [field("n", "5")]))
    replay_key = str(runner.replay(key))
    assert replay_key != key
    original = runner.sessions.load(key)
    replayed = runner.sessions.load(replay_key)
    assert deep_equals(
        original.namespace[VALUE_NAME], replayed.namespace[VALUE_NAME]
    )
    assert replayed.meta["seed"] == original.meta["seed"]
    again = runner.sessions.load(str(runner.replay(replay_key)))
    assert deep_equals(
        again.namespace[VALUE_NAME], original.namespace[VALUE_NAME]
    )


def test_key_arguments(runner):
    noise = runner.resolve_target(demo("R", "noise"))
    first = str(runner.run(noise, [field("n", "3")], seed=1))
    center = runner.resolve_target(demo("R", "center"))
    key = str(runner.run(center, [field("x", first)]))
    record = runner.sessions.call_record(key)
    assert record["args"][0]["kind"] == "key"
    assert record["args"][0]["reference"] == first
    values = runner.sessions.load(key).namespace[VALUE_NAME].to_list()
    assert sum(values) == pytest.approx(0.0)


def test_failures_store_nothing(runner, tmp_path):
    center = runner.resolve_target(demo("R", "center"))
    with pytest.raises(LangError):
        runner.run(center, [field("x", '"a"')])
    with pytest.raises(ArgumentError, match="more than once"):
        runner.run(center, [field("x", "1"), field("x", "2")])
    with pytest.raises(ArgumentError):
        runner.run(center, [field("x", "1 +")])
    script = RpcTarget(SCRIPT, "bad.r", script="x <- 1\ny <- undefined\n")
    with pytest.raises(LangError):
        runner.run(script)
    assert os.listdir(tmp_path / "sessions") == []


def test_budgets(tmp_path):
    runner = make_runner(tmp_path, cell_limit=100)
    noise = runner.resolve_target(demo("R", "noise"))
    with pytest.raises(ResourceError, match="cell limit"):
        runner.run(noise, [field("n", "1000")])


def test_replay_errors(runner):
    with pytest.raises(NotFoundError):
        runner.replay("x0000000000000000000")


def test_replayed_closures_keep_free_variables(runner):
    script = RpcTarget(
        SCRIPT,
        "defs.r",
        script="a <- 2\nf <- function(x) x + a\napply3 <- function(g) g(3)\n",
    )
    defs = str(runner.run(script))
    apply3 = runner.resolve_target(ResourcePath("tmp", defs, ["R", "apply3"]))
    key = str(runner.run(apply3, [field("g", f"{defs}::f")]))
    assert runner.sessions.load(key).namespace[VALUE_NAME].to_list() == [5.0]
    record = runner.sessions.call_record(key)
    assert "a" in record["args"][0]["environment"]
    replayed = runner.sessions.load(str(runner.replay(key)))
    assert replayed.namespace[VALUE_NAME].to_list() == [5.0]


def test_cancelled_budget_stores_nothing(runner, tmp_path):
    noise = runner.resolve_target(demo("R", "noise"))
    budget = runner.budget()
    budget.cancel()
    with pytest.raises(ResourceError, match="time limit"):
        runner.run(noise, budget=budget)
    script = RpcTarget(SCRIPT, "long.r", script="x <- rnorm(2000000)\n")
    budget = runner.budget()
    timer = threading.Timer(0.2, budget.cancel)
    timer.start()
    try:
        with pytest.raises(ResourceError, match="time limit"):
            runner.run(script, budget=budget)
    finally:
        timer.cancel()
    assert os.listdir(tmp_path / "sessions") == []


def test_errors_carry_the_console(runner):
    script = RpcTarget(
        SCRIPT, "bad.r", script="x <- 1\nprint(x)\ny + 1\nz <- 2\n"
    )
    with pytest.raises(LangError) as error:
        runner.run(script)
    assert error.value.console.startswith(
        "> x <- 1\n> print(x)\n[1] 1\n> y + 1\nError: object 'y' not found"
    )
    assert "z <- 2" not in error.value.console
    center = runner.resolve_target(demo("R", "center"))
    with pytest.raises(LangError) as error:
        runner.run(center, [field("x", '"a"')])
    assert error.value.console.startswith('> center(x = "a")\nError: ')
    budget = runner.budget()
    budget.cancel()
    noise = runner.resolve_target(demo("R", "noise"))
    with pytest.raises(ResourceError) as error:
        runner.run(noise, budget=budget)
    assert error.value.console is None


@pytest.mark.parametrize("name", ["source", "console", "R/x.csv", "info"])
def test_reserved_file_names(runner, tmp_path, name):
    script = RpcTarget(
        SCRIPT, "out.r", script=f'write_csv(data_frame(a = 1), "{name}")\n'
    )
    with pytest.raises(LangError, match="reserved"):
        runner.run(script)
    assert os.listdir(tmp_path / "sessions") == []
