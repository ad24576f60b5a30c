""" Test parsing and rendering of manual pages. """

import pytest

from src.formats.manual import parse_manual, render_html, render_text
from src.values.container import ManualPage

MANUAL = (
    "# Title\n"
    "Center a vector\n"
    "# Usage\n"
    "center(x)\n"
    "# Description\n"
    "Subtracts the mean.\n"
    "\n"
    "Second paragraph.\n"
    "# Arguments\n"
    "x: a numeric\n"
    "  vector\n"
    "na_rm: drop missing values\n"
)


def test_parse_manual():
    page = parse_manual("center", MANUAL)
    assert page.title == "Center a vector"
    assert page.usage == "center(x)"
    assert page.description == "Subtracts the mean.\n\nSecond paragraph."
    assert page.arguments == (
        ("x", "a numeric vector"),
        ("na_rm", "drop missing values"),
    )


def test_render_text():
    page = parse_manual("center", MANUAL)
    assert render_text(page) == (
        "center: Center a vector\n"
        "\n"
        "Usage:\n"
        "  center(x)\n"
        "\n"
        "Description:\n"
        "  Subtracts the mean.\n"
        "\n"
        "  Second paragraph.\n"
        "\n"
        "Arguments:\n"
        "  x      a numeric vector\n"
        "  na_rm  drop missing values\n"
    )
    assert render_text(ManualPage("cats", "Cat data")) == (
        "cats: Cat data\n"
    )


def test_render_html():
    text = render_html(parse_manual("center", MANUAL))
    assert text.startswith("<!DOCTYPE html>\n")
    assert "<h1>center: Center a vector</h1>" in text
    assert "<p>Subtracts the mean.</p>\n<p>Second paragraph.</p>" in text
    assert "<dt><code>x</code></dt><dd>a numeric vector</dd>" in text
    escaped = render_html(ManualPage("lt", "a < b & c"))
    assert "<h1>lt: a &lt; b &amp; c</h1>" in escaped


@pytest.mark.parametrize(
    "text",
    [
        "# Bogus\nx\n",
        "text\n# Title\nx\n",
        "# Usage\nf()\n",
        "# Title\nt\n# Title\nu\n",
        "# Title\nt\n# Arguments\nno colon\n",
    ],
)
def test_invalid_manuals(text):
    with pytest.raises(ValueError):
        parse_manual("f", text)
