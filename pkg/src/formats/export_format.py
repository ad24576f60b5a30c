"""
Export formats: the format id chosen by the client plus its formatting
parameters, validated when the format is created.
"""

from types import MappingProxyType
from typing import Any, Callable, Dict, Mapping, Optional

from src.errors import FormatError

MEDIA_TYPES = {
    "print": "text/plain",
    "json": "application/json",
    "csv": "text/csv",
    "tab": "text/plain",
    "bin": "application/octet-stream",
    "png": "image/png",
    "svg": "image/svg+xml",
    "text": "text/plain",
    "html": "text/html",
}
UNSUPPORTED = ("pdf", "pb", "rda", "rds")
MAX_DIMENSION = 5000
LINE_ENDINGS = {"\n": "\n", "\r\n": "\r\n", "LF": "\n", "CRLF": "\r\n"}


def _digits(text: str) -> int:
    value = _integer(text, "digits")
    if not 1 <= value <= 22:
        raise FormatError('parameter "digits" must be between 1 and 22')
    return value


def _integer(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f'parameter "{name}" must be an integer')


def _dimension(name: str) -> Callable[[str], int]:
    def parse(text: str) -> int:
        value = _integer(text, name)
        if not 1 <= value <= MAX_DIMENSION:
            raise FormatError(
                f'parameter "{name}" must be between 1 and {MAX_DIMENSION}'
            )
        return value

    return parse


def _flag(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise FormatError('parameter "pretty" must be true or false')


def _character(name: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text == "\\t":
            text = "\t"
        if len(text) != 1 or text in ('"', "\n", "\r"):
            raise FormatError(
                f'parameter "{name}" must be a single character other than '
                "a quote or line break"
            )
        return text

    return parse


def _eol(text: str) -> str:
    if text not in LINE_ENDINGS:
        raise FormatError('parameter "eol" must be LF or CRLF')
    return LINE_ENDINGS[text]


PARAMETERS: Dict[str, Dict[str, Callable[[str], Any]]] = {
    "print": {"digits": _digits},
    "json": {"pretty": _flag},
    "csv": {},
    "tab": {"sep": _character("sep"), "eol": _eol, "dec": _character("dec")},
    "bin": {},
    "png": {"width": _dimension("width"), "height": _dimension("height")},
    "svg": {"width": _dimension("width"), "height": _dimension("height")},
    "text": {},
    "html": {},
}
DEFAULTS: Dict[str, Dict[str, Any]] = {
    "print": {"digits": 7},
    "json": {"pretty": False},
    "tab": {"sep": "\t", "eol": "\n", "dec": "."},
    "png": {"width": 640, "height": 480},
    "svg": {"width": 640, "height": 480},
}


class ExportFormat:
    """
    A validated export format. Parameter values are converted to their
    python types, missing parameters take their defaults.
    """

    def __init__(
        self, format_id: str, params: Optional[Mapping[str, str]] = None
    ) -> None:
        """
        Create the format.

        :param format_id: One of the MEDIA_TYPES keys.
        :param params: Raw parameter strings, e.g. from the query string.
        :raise FormatError: For unknown parameters or invalid values.
        """
        parsers = PARAMETERS[format_id]
        values = dict(DEFAULTS.get(format_id, {}))
        for name, text in (params or {}).items():
            if name not in parsers:
                raise FormatError(
                    f'format "{format_id}" has no parameter "{name}"'
                )
            values[name] = parsers[name](text)
        if format_id == "tab" and values["sep"] == values["dec"]:
            raise FormatError('parameters "sep" and "dec" must differ')
        self.id = format_id
        self.params = MappingProxyType(values)

    @property
    def media_type(self) -> str:
        return MEDIA_TYPES[self.id]

    def __repr__(self) -> str:
        return f"ExportFormat({self.id}, {dict(self.params)})"


class ExportFormatFactory:
    """
    Factory for export formats.
    """

    @staticmethod
    def get(
        format_id: str, params: Optional[Mapping[str, str]] = None
    ) -> ExportFormat:
        """
        Create an export format.

        :param format_id: The format id.
        :param params: Formatting parameters.
        :raise FormatError: For unsupported formats and bad parameters.
        :return: The format.
        """
        if format_id in UNSUPPORTED:
            raise FormatError(
                f'format "{format_id}" is not supported by this server'
            )
        if format_id not in MEDIA_TYPES:
            raise FormatError(f'format "{format_id}" does not exist')
        return ExportFormat(format_id, params)

    @staticmethod
    def is_format(segment: str) -> bool:
        """
        Whether a path segment names a format, supported or not.

        :param segment: The last path segment of a request.
        :return: True for format ids.
        """
        return segment in MEDIA_TYPES or segment in UNSUPPORTED
