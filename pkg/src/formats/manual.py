"""
Manual pages: parsing the man/*.txt files of packages and rendering pages
as plain text or html.

A manual file consists of sections introduced by "# Title", "# Usage",
"# Description" and "# Arguments". The argument section holds one
"name: text" line per argument, indented lines continue the previous one.
"""

import html
from typing import Dict, List

from src.values.container import ManualPage

SECTIONS = ("title", "usage", "description", "arguments")


def parse_manual(name: str, text: str) -> ManualPage:
    """
    Parse a manual file.

    :param name: Name of the documented object (the file stem).
    :param text: The file content.
    :raise ValueError: For unknown sections, a missing title or malformed
        argument lines.
    :return: The manual page.
    """
    sections: Dict[str, List[str]] = {}
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            current = line.lstrip("#").strip().lower()
            if current not in SECTIONS:
                raise ValueError(f'Unknown manual section "{current}"!')
            if current in sections:
                raise ValueError(f'Duplicate manual section "{current}"!')
            sections[current] = []
        elif current is None:
            if line.strip():
                raise ValueError(
                    f"Text before the first section in line {number}!"
                )
        else:
            sections[current].append(line)
    title = " ".join(line.strip() for line in sections.get("title", []))
    if not title.strip():
        raise ValueError("The manual has no title!")
    arguments = []
    for line in sections.get("arguments", []):
        if not line.strip():
            continue
        if line[0].isspace() and arguments:
            argument, description = arguments[-1]
            arguments[-1] = (argument, f"{description} {line.strip()}")
        elif ":" in line:
            argument, description = line.split(":", 1)
            arguments.append((argument.strip(), description.strip()))
        else:
            raise ValueError(f'Malformed argument line "{line}"!')
    return ManualPage(
        name,
        title.strip(),
        _block(sections.get("description", [])),
        _block(sections.get("usage", [])),
        arguments,
    )


def _block(lines: List[str]) -> str:
    return "\n".join(lines).strip("\n")


def _indent(text: str) -> str:
    return "\n".join("  " + line if line else "" for line in text.split("\n"))


def render_text(page: ManualPage) -> str:
    """
    Render a manual page as plain text.

    :param page: The manual page.
    :return: The text, ending with a newline.
    """
    parts = [f"{page.name}: {page.title}"]
    if page.usage:
        parts.append("Usage:\n" + _indent(page.usage))
    if page.description:
        parts.append("Description:\n" + _indent(page.description))
    if page.arguments:
        width = max(len(name) for name, _ in page.arguments)
        lines = [
            f"  {name.ljust(width)}  {text}" for name, text in page.arguments
        ]
        parts.append("Arguments:\n" + "\n".join(lines))
    return "\n\n".join(parts) + "\n"


def render_html(page: ManualPage) -> str:
    """
    Render a manual page as a standalone html document.

    :param page: The manual page.
    :return: The html text.
    """
    name = html.escape(page.name)
    title = html.escape(page.title)
    body = [f"<h1>{name}: {title}</h1>"]
    if page.usage:
        body.append(f"<h2>Usage</h2>\n<pre>{html.escape(page.usage)}</pre>")
    if page.description:
        paragraphs = [
            f"<p>{html.escape(paragraph.strip())}</p>"
            for paragraph in page.description.split("\n\n")
            if paragraph.strip()
        ]
        body.append("<h2>Description</h2>\n" + "\n".join(paragraphs))
    if page.arguments:
        items = [
            f"<dt><code>{html.escape(argument)}</code></dt>"
            f"<dd>{html.escape(text)}</dd>"
            for argument, text in page.arguments
        ]
        listing = "\n".join(items)
        body.append(f"<h2>Arguments</h2>\n<dl>\n{listing}\n</dl>")
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        f"<title>{name}</title>\n</head>\n<body>\n"
        + "\n".join(body)
        + "\n</body>\n</html>\n"
    )
