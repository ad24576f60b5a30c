""" Test the file and printing builtins. """

import os

import pytest

from src.errors import LangError
from src.lang.builtins.io import safe_relative
from src.lang.context import EvalContext
from src.lang.evaluator import VALUE_NAME, run_script


def test_write_and_read_csv(tmp_path):
    ctx = EvalContext(workdir=str(tmp_path))
    run_script(
        'x <- data_frame(a = c(1.5, NA), b = c("x", "y,z"))\n'
        'write_csv(x, "out/table.csv")\n'
        'y <- read_csv("out/table.csv")',
        ctx,
    )
    with open(os.path.join(tmp_path, "out", "table.csv"), "rb") as handle:
        assert handle.read() == b'a,b\n1.5,x\n,"y,z"\n'
    frame = ctx.namespace["y"]
    assert frame.names == ["a", "b"]
    assert frame.column("a").to_list() == [1.5, None]
    assert frame.column("b").to_list() == ["x", "y,z"]
    assert ctx.output() == ""


def test_read_from_readonly_roots(tmp_path):
    package = tmp_path / "package"
    package.mkdir()
    (package / "data.csv").write_bytes(b"flag,n\nTRUE,1\nFALSE,\n")
    work = tmp_path / "work"
    work.mkdir()
    ctx = EvalContext(workdir=str(work), readonly_roots=[str(package)])
    run_script('read_csv("data.csv")', ctx)
    frame = ctx.namespace[VALUE_NAME]
    assert frame.column("flag").to_list() == [True, False]
    assert frame.column("n").to_list() == [1.0, None]
    with pytest.raises(LangError):
        run_script('write_csv(data_frame(a = 1), "../escape.csv")', ctx)
    assert not (tmp_path / "escape.csv").exists()


@pytest.mark.parametrize(
    "text",
    [
        'read_csv("missing.csv")',
        'read_csv("/etc/passwd")',
        'read_csv("../secret.csv")',
        'write_csv(c(1, 2), "a.csv")',
    ],
)
def test_file_errors(tmp_path, text):
    with pytest.raises(LangError):
        run_script(text, EvalContext(workdir=str(tmp_path)))


def test_write_needs_a_working_directory():
    with pytest.raises(LangError) as error:
        run_script('write_csv(data_frame(a = 1), "a.csv")', EvalContext())
    assert "not possible" in str(error.value)


def test_safe_relative():
    assert safe_relative("a/b.csv") == "a/b.csv"
    for name in ["", "/abs", "a/../b", "./a", "a//b", "a\\b", "a/"]:
        with pytest.raises(LangError):
            safe_relative(name)


def test_print_digits():
    ctx = EvalContext()
    run_script("print(1 / 3, digits = 3)\nx <- print(2)", ctx)
    assert ctx.output() == "[1] 0.333\n[1] 2\n"
    assert ctx.namespace["x"].to_list() == [2.0]
    with pytest.raises(LangError):
        run_script("print(1, digits = 30)", EvalContext())
