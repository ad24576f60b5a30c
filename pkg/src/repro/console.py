""" Reconstruction of the console transcript of an RPC. """

from typing import List, Optional, Sequence

from src.lang.evaluator import TranscriptEntry


def _echo(lines: List[str], first: int, last: int, out: List[str]) -> None:
    for number in range(first, last + 1):
        prefix = "> " if number == first else "+ "
        out.append(f"{prefix}{lines[number - 1]}\n")


def build_console(source: str, entries: Sequence[TranscriptEntry]) -> str:
    """
    Interleave the source of a script with the output of its statements.
    The first line of a statement is prefixed with "> ", continuation
    lines with "+ ". Lines outside statements (blank lines, comments) are
    echoed with "> " so the stripped console lines reproduce the source.

    :param source: The script text.
    :param entries: Transcript entries of the executed statements.
    :return: The console text.
    """
    lines = source.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    out: List[str] = []
    cursor = 1
    for entry in entries:
        for number in range(cursor, entry.first_line):
            _echo(lines, number, number, out)
        if entry.first_line >= cursor:
            _echo(lines, entry.first_line, entry.last_line, out)
        elif entry.last_line >= cursor:
            _echo(lines, cursor, entry.last_line, out)
        out.append(entry.output)
        if entry.error is not None:
            out.append(f"Error: {entry.error}\n")
            return "".join(out)
        cursor = max(cursor, entry.last_line + 1)
    for number in range(cursor, len(lines) + 1):
        _echo(lines, number, number, out)
    return "".join(out)


def call_console(source: str, stdout: str, error: Optional[str] = None):
    """
    Console of a function call: the call, then its output.

    :param source: The canonical call text.
    :param stdout: Everything the call printed.
    :param error: The error message if the call failed.
    :return: The console text.
    """
    lines = source.split("\n")
    entry = TranscriptEntry(1, len(lines), stdout, error)
    return build_console(source, [entry])
