""" Test the HTTP surface of the gateway end to end. """

import os
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from src.api.app import create_app
from src.store.config import ServerConfig
from src.utils.logging import ServerLogger
from src.values.keys import is_key, new_session_key

LIBRARY = os.path.join(os.path.dirname(__file__), "..", "..", "library")
CENTER = "/ocpu/library/demo/R/center"


def make_client(tmp_path, logger=None, **kwargs) -> TestClient:
    config = ServerConfig(
        package_root=LIBRARY,
        session_root=str(tmp_path / "sessions"),
        deterministic_seed=0,
        log_level="WARNING",
        **kwargs,
    )
    return TestClient(create_app(config, logger))


@pytest.fixture
def client(tmp_path):
    with make_client(tmp_path) as client:
        yield client


def created(response) -> str:
    assert response.status_code == 201, response.text
    location = response.headers["location"]
    assert location.startswith("/ocpu/tmp/") and location.endswith("/")
    return location


def test_listings(client):
    response = client.get("/ocpu/")
    assert response.status_code == 200
    assert response.text == "library/\n"
    assert response.headers["content-type"] == "text/plain; charset=utf-8"
    assert client.get("/ocpu/library/").text == "base\ndemo\n"
    entries = client.get("/ocpu/library/demo/").text.splitlines()
    assert entries[:3] == ["R/", "data/", "man/"]
    assert {"info", "MANIFEST", "NEWS", "scripts/"} <= set(entries)
    names = client.get("/ocpu/library/demo/R/").text.splitlines()
    assert "center" in names and "collinear_x" in names
    assert client.get("/ocpu/library/demo/scripts/").text == "analysis.r\n"


@pytest.mark.parametrize(
    "path, location",
    [
        ("/ocpu", "/ocpu/"),
        ("/ocpu/library", "/ocpu/library/"),
        ("/ocpu/library/demo", "/ocpu/library/demo/"),
        ("/ocpu/library/demo/scripts", "/ocpu/library/demo/scripts/"),
    ],
)
def test_redirects(client, path, location):
    response = client.get(path, follow_redirects=False)
    assert response.status_code == 302
    assert response.headers["location"] == location


def test_package_resources(client):
    data = client.get("/ocpu/library/demo/data/cats/csv")
    assert data.status_code == 200
    assert data.headers["content-type"] == "text/csv; charset=utf-8"
    assert data.text.splitlines()[0] == "Sex,Bwt,Hwt"
    manual = client.get("/ocpu/library/demo/man/center/html")
    assert manual.headers["content-type"] == "text/html; charset=utf-8"
    assert "Center a numeric vector" in manual.text
    news = client.get("/ocpu/library/demo/NEWS")
    assert news.status_code == 200 and news.content
    mean = client.get("/ocpu/library/base/man/mean/text")
    assert "mean(x, na_rm = FALSE)" in mean.text


@pytest.mark.parametrize(
    "path",
    [
        "/ocpu/library/nope/",
        "/ocpu/library/demo/R/nope",
        "/ocpu/library/demo/graphics/1",
        "/ocpu/tmp/x0000000000000000000/",
        "/ocpu/tmp/not-a-key/R/.val",
        "/elsewhere/",
    ],
)
def test_not_found(client, path):
    response = client.get(path)
    assert response.status_code == 404
    assert response.text.endswith("\n")


def test_method_not_allowed(client):
    for method in ("PUT", "DELETE", "PATCH"):
        response = client.request(method, CENTER)
        assert response.status_code == 405
        assert response.headers["allow"] == "GET, POST"
    response = client.post("/ocpu/library/demo/data/cats", data={"a": "1"})
    assert response.status_code == 405


def test_function_call(client):
    response = client.post(CENTER, data={"x": "c(1, 2, 3)"})
    location = created(response)
    assert response.text.splitlines() == [
        f"{location}R/.val",
        f"{location}source",
        f"{location}stdout",
        f"{location}console",
        f"{location}info",
    ]
    assert client.get(f"{location}R/.val").text == "[1] -1  0  1\n"
    assert client.get(f"{location}R/.val/json").json() == [-1, 0, 1]
    assert client.get(f"{location}source").text == "center(x = c(1, 2, 3))"
    info = client.get(f"{location}info").text
    assert '"session"' in info and "$seed" in info
    assert client.get(location).text.splitlines()[0] == "R/"


def test_json_body(client):
    location = created(client.post(CENTER, json={"x": [2, 4]}))
    assert client.get(f"{location}R/.val/json").json() == [-1, 1]


def test_export_errors(client):
    location = created(client.post(CENTER, data={"x": "c(1, 2)"}))
    for suffix in ("csv", "png", "pdf", "print?digits=99", "json?x=1"):
        response = client.get(f"{location}R/.val/{suffix}")
        assert response.status_code == 400, suffix
    response = client.get(f"{location}R/.val?digits=3")
    assert response.status_code == 200
    assert response.text == "[1] -0.5  0.5\n"


def test_seeds(client):
    noise = "/ocpu/library/demo/R/noise"
    first = created(client.post(noise, data={"n": "3", ".seed": "42"}))
    second = created(client.post(noise, data={"n": "3", ".seed": "42"}))
    assert first != second
    assert (
        client.get(f"{first}R/.val/json").json()
        == client.get(f"{second}R/.val/json").json()
    )
    for seed in ("-1", "abc"):
        response = client.post(noise, data={"n": "3", ".seed": seed})
        assert response.status_code == 400
    response = client.post(noise, data={"n": "3", ".other": "1"})
    assert response.status_code == 400
    assert "unknown control field" in response.text


def test_graphics(client):
    location = created(
        client.post(
            "/ocpu/library/demo/R/scatter",
            data={"x": "c(1, 2, 3)", "y": "c(3, 1, 2)", "main": '"pts"'},
        )
    )
    assert client.get(f"{location}graphics/").text == "1\n"
    png = client.get(f"{location}graphics/1")
    assert png.headers["content-type"] == "image/png"
    assert png.content.startswith(b"\x89PNG")
    svg = client.get(f"{location}graphics/1/svg?width=200&height=100")
    assert svg.headers["content-type"] == "image/svg+xml"
    assert b"<svg" in svg.content
    assert client.get(f"{location}graphics/2").status_code == 404


def test_uploaded_script(client):
    response = client.post(
        "/ocpu/run",
        data={"n": "2"},
        files={"file": ("double.r", b"y <- n * 2\ny\n")},
    )
    location = created(response)
    assert response.text.splitlines() == [
        f"{location}R/.val",
        f"{location}R/n",
        f"{location}R/y",
        f"{location}files/double.r",
        f"{location}source",
        f"{location}stdout",
        f"{location}console",
        f"{location}info",
    ]
    assert client.get(f"{location}stdout").text == "[1] 4\n"
    script = b"y <- n * 2\ny\n"
    assert client.get(f"{location}files/double.r").content == script
    assert client.get(f"{location}double.r").content == script
    assert client.get(f"{location}console").text == (
        "> y <- n * 2\n> y\n[1] 4\n"
    )


def test_run_requires_script(client):
    response = client.post("/ocpu/run", data={"n": "2"})
    assert response.status_code == 400
    response = client.post(
        "/ocpu/run", files={"file": ("notes.txt", b"1 + 1\n")}
    )
    assert response.status_code == 400


def test_package_script(client):
    location = created(
        client.post("/ocpu/library/demo/scripts/analysis.r", data={})
    )
    assert client.get(f"{location}stdout").text == "[1] 2.616667\n"
    assert client.get(f"{location}R/cats/csv").status_code == 200
    response = client.post("/ocpu/library/demo/NEWS", data={"a": "1"})
    assert response.status_code == 400


def test_replay(client):
    noise = "/ocpu/library/demo/R/noise"
    original = created(client.post(noise, data={"n": "4"}))
    key = original.rstrip("/").rsplit("/", 1)[-1]
    replayed = created(client.post(f"/ocpu/tmp/{key}/replay"))
    assert replayed != original
    assert (
        client.get(f"{original}R/.val/json").json()
        == client.get(f"{replayed}R/.val/json").json()
    )
    response = client.post(f"/ocpu/tmp/{key}/replay", data={"n": "5"})
    assert response.status_code == 400
    response = client.post("/ocpu/tmp/x0000000000000000000/replay")
    assert response.status_code == 404


def test_session_keys_as_arguments(client):
    first = created(client.post(CENTER, data={"x": "c(1, 5)"}))
    key = first.rstrip("/").rsplit("/", 1)[-1]
    second = created(client.post(CENTER, data={"x": key}))
    assert client.get(f"{second}R/.val/json").json() == [-2, 2]
    response = client.post(CENTER, data={"x": "x0000000000000000000"})
    assert response.status_code == 400


def test_evaluation_errors(client):
    response = client.post(CENTER, data={"x": "c(1, "})
    assert response.status_code == 400
    assert response.text.startswith('argument "x"')
    response = client.post(CENTER, data={"x": '"text"'})
    assert response.status_code == 400
    response = client.post(
        "/ocpu/library/demo/R/lsfit",
        data={
            "x": "data_frame(a = c(1, 2, 3), b = c(2, 4, 6))",
            "y": "c(1, 2, 3)",
        },
    )
    assert response.status_code == 400
    assert "rank deficient" in response.text


def test_budget_errors(client):
    response = client.post(CENTER, data={"x": "rep(0, 10^12)"})
    assert response.status_code == 503
    assert "cell limit" in response.text


def test_request_body_errors(tmp_path):
    with make_client(tmp_path, max_body=64) as client:
        response = client.post(CENTER, data={"x": "c(" + "1, " * 50 + "1)"})
        assert response.status_code == 413
        response = client.post(
            CENTER,
            content=b"<x>1</x>",
            headers={"content-type": "text/xml"},
        )
        assert response.status_code == 415
        response = client.post(
            CENTER,
            content=b"[1, 2]",
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 400


def test_concurrent_rpcs(client):
    def call(index):
        return client.post(CENTER, data={"x": f"c({index}, 1)"})

    started = time.monotonic()
    with ThreadPoolExecutor(max_workers=16) as pool:
        responses = list(pool.map(call, range(32)))
    assert time.monotonic() - started < 30
    locations = [created(response) for response in responses]
    assert len(set(locations)) == 32
    for index, location in enumerate(locations):
        half = (index - 1) / 2
        value = client.get(f"{location}R/.val/json").json()
        assert value == pytest.approx([half, -half])


def test_request_logging(tmp_path):
    logger = ServerLogger("WARNING")
    with make_client(tmp_path, logger) as client:
        client.get("/ocpu/")
        client.get("/ocpu/library/demo/R/nope")
    assert logger.logs["status"] == [200, 404]
    assert logger.logs["path"] == ["/ocpu/", "/ocpu/library/demo/R/nope"]
    assert logger.logs["version"]


def upload(client, script: bytes, name: str = "script.r"):
    return client.post("/ocpu/run", files={"file": (name, script)})


def test_names_that_look_like_formats(client):
    response = client.get("/ocpu/library/base/R/print")
    assert response.status_code == 200
    assert '.Primitive("print")' in response.text
    location = created(upload(client, b"json <- c(1, 2)\n"))
    assert client.get(f"{location}R/json").text == "[1] 1 2\n"
    assert client.get(f"{location}R/json/json").json() == [1, 2]
    listing = client.get("/ocpu/library/demo/R/json")
    assert listing.headers["content-type"].startswith("application/json")
    assert "center" in listing.json()


def test_written_files(client):
    response = upload(
        client, b'write_csv(data_frame(a = c(1, 2)), "out/table.csv")\n'
    )
    location = created(response)
    assert f"{location}files/out/table.csv" in response.text.splitlines()
    table = client.get(f"{location}files/out/table.csv")
    assert table.status_code == 200
    assert table.text == "a\n1\n2\n"
    assert client.get(f"{location}files/").text == "out/\nscript.r\n"
    assert client.get(f"{location}files/out/").text == "table.csv\n"
    assert client.get(f"{location}files/nope.csv").status_code == 404


@pytest.mark.parametrize("name", ["source", "R", "files"])
def test_reserved_file_names(client, name):
    response = upload(
        client, f'write_csv(data_frame(a = 1), "{name}")\n'.encode()
    )
    assert response.status_code == 400
    assert "reserved" in response.text


def test_errors_show_the_console(client):
    response = upload(client, b"x <- 1\nprint(x)\ny + x\n")
    assert response.status_code == 400
    assert "\n\nIn call:\n> x <- 1\n> print(x)\n[1] 1\n> y + x\n" in (
        response.text
    )
    assert "Error: object 'y' not found" in response.text
    response = client.post(CENTER, data={"x": '"text"'})
    assert response.status_code == 400
    assert '\n\nIn call:\n> center(x = "text")\nError: ' in response.text
    response = client.post(CENTER, data={"x": "c(1, "})
    assert "In call:" not in response.text


def test_timeouts(tmp_path):
    noise = "/ocpu/library/demo/R/noise"
    with make_client(tmp_path, timeout=0.5) as client:
        with ThreadPoolExecutor(max_workers=1) as pool:
            started = time.monotonic()
            pending = pool.submit(client.post, noise, data={"n": "2000000"})
            assert client.get("/ocpu/library/").status_code == 200
            response = pending.result()
        assert time.monotonic() - started < 0.5 + 1
        assert response.status_code == 503
        assert "time limit" in response.text
        assert client.get("/ocpu/library/").status_code == 200
        time.sleep(0.5)
        sessions = os.listdir(tmp_path / "sessions")
        assert [name for name in sessions if is_key(name)] == []


def test_unknown_sessions(client):
    created(client.post(CENTER, data={"x": "1"}))
    for _ in range(200):
        key = str(new_session_key())
        assert client.get(f"/ocpu/tmp/{key}/").status_code == 404
        assert client.get(f"/ocpu/tmp/{key}/R/.val").status_code == 404


DRAW = b"plot(runif(20), main = label)\nprint(rnorm(3))\n"


def _rpc(client, index: int, previous: str):
    seed = str(index % 10)
    if index % 3 == 0:
        return client.post(
            "/ocpu/library/demo/R/noise", data={"n": "4", ".seed": seed}
        )
    if index % 3 == 1:
        return client.post(
            "/ocpu/run",
            data={"label": f'"run {index}"', ".seed": seed},
            files={"file": ("draw.r", DRAW)},
        )
    return client.post(CENTER, data={"x": previous, ".seed": seed})


def test_seeded_replays_are_identical(client):
    previous = None
    for index in range(100):
        location = created(_rpc(client, index, previous))
        key = location.rstrip("/").rsplit("/", 1)[-1]
        if index % 3 == 0:
            previous = key
        replayed = created(client.post(f"/ocpu/tmp/{key}/replay"))
        for section in ("stdout", "console", "R/.val/json"):
            original = client.get(f"{location}{section}")
            assert original.status_code == 200, section
            again = client.get(f"{replayed}{section}")
            assert original.content == again.content, section
        if index % 3 == 1:
            first = client.get(f"{location}graphics/1/svg")
            second = client.get(f"{replayed}graphics/1/svg")
            assert first.status_code == 200
            assert first.content == second.content
