"""
Export of resources in a client chosen format.

The support matrix: print, json and bin apply to every value except
functions, which only print. csv and tab need a data frame, svg and png a
graphics recording. Manuals export as print, text, html and json; text
resources and listings as print, text and json. Exports never touch the
store, the clock or a random number generator.
"""

import mimetypes
from typing import Tuple

from src.errors import FormatError
from src.formats.binary import encode_bin
from src.formats.export_format import ExportFormat, ExportFormatFactory
from src.formats.graphics_renderer import RendererFactory
from src.formats.json_codec import dump_json, export_json
from src.formats.manual import render_html, render_text
from src.formats.printing import print_value
from src.formats.tabular import export_table
from src.values.container import ManualPage, Resource, ResourceKind
from src.values.graphics import GraphicsRecording
from src.values.value import DataFrame, Function, Value

DEFAULT_FORMATS = {
    ResourceKind.OBJECT: "print",
    ResourceKind.DATA: "print",
    ResourceKind.INFO: "print",
    ResourceKind.GRAPHIC: "png",
    ResourceKind.MANUAL: "text",
    ResourceKind.LISTING: "text",
    ResourceKind.SOURCE: "text",
    ResourceKind.STDOUT: "text",
    ResourceKind.CONSOLE: "text",
    ResourceKind.WARNINGS: "text",
}
VALUE_KINDS = (
    ResourceKind.OBJECT,
    ResourceKind.DATA,
    ResourceKind.INFO,
    ResourceKind.GRAPHIC,
)


def _inapplicable(fmt: ExportFormat, what: str) -> FormatError:
    return FormatError(f'format "{fmt.id}" is not applicable to {what}')


def _describe(value: Value) -> str:
    if isinstance(value, Function):
        return "a function"
    if isinstance(value, GraphicsRecording):
        return "a graphic"
    if isinstance(value, DataFrame):
        return "a data frame"
    return f"a value of type {value.tag.value}"


def export_value(value: Value, fmt: ExportFormat) -> bytes:
    """
    Export a value, graphics recordings included.

    :param value: The value.
    :param fmt: The format.
    :raise FormatError: If the format does not apply to the value.
    :return: The exported bytes.
    """
    if fmt.id == "print":
        return (print_value(value, fmt.params["digits"]) + "\n").encode()
    if isinstance(value, Function):
        raise _inapplicable(fmt, "a function")
    if fmt.id == "json":
        return export_json(value, fmt.params["pretty"])
    if fmt.id == "bin":
        return encode_bin(value)
    if fmt.id in ("csv", "tab"):
        if not isinstance(value, DataFrame):
            raise _inapplicable(fmt, _describe(value))
        if fmt.id == "csv":
            return export_table(value)
        return export_table(value, **fmt.params)
    if fmt.id in ("svg", "png"):
        if not isinstance(value, GraphicsRecording):
            raise _inapplicable(fmt, _describe(value))
        renderer = RendererFactory.get(fmt.id)
        return renderer.render(
            value, fmt.params["width"], fmt.params["height"]
        )
    raise _inapplicable(fmt, _describe(value))


def export_manual(page: ManualPage, fmt: ExportFormat) -> bytes:
    if fmt.id in ("print", "text"):
        return render_text(page).encode()
    if fmt.id == "html":
        return render_html(page).encode()
    if fmt.id == "json":
        return dump_json(page.to_dict(), fmt.params["pretty"])
    raise _inapplicable(fmt, "a manual page")


def export_text(text: str, fmt: ExportFormat) -> bytes:
    if fmt.id in ("print", "text"):
        return text.encode()
    if fmt.id == "json":
        return dump_json(text, fmt.params["pretty"])
    raise _inapplicable(fmt, "a text resource")


def export_listing(names, fmt: ExportFormat) -> bytes:
    if fmt.id in ("print", "text"):
        return "".join(f"{name}\n" for name in names).encode()
    if fmt.id == "json":
        return dump_json(list(names), fmt.params["pretty"])
    raise _inapplicable(fmt, "a listing")


def export(resource: Resource, fmt: ExportFormat = None) -> Tuple[bytes, str]:
    """
    Export a resolved resource.

    :param resource: The resource handle.
    :param fmt: The format, None for the default of the resource kind.
    :raise FormatError: If the format does not apply to the resource.
    :return: Tuple (bytes, media type).
    """
    if resource.kind == ResourceKind.FILE:
        if fmt is not None:
            raise _inapplicable(fmt, "a file")
        media_type, _ = mimetypes.guess_type(resource.name)
        return resource.value, media_type or "application/octet-stream"
    if fmt is None:
        fmt = ExportFormatFactory.get(DEFAULT_FORMATS[resource.kind])
    kind = resource.kind
    if kind in VALUE_KINDS:
        body = export_value(resource.value, fmt)
    elif kind == ResourceKind.MANUAL:
        body = export_manual(resource.value, fmt)
    elif kind == ResourceKind.LISTING:
        body = export_listing(resource.value, fmt)
    else:
        body = export_text(resource.value, fmt)
    return body, fmt.media_type
