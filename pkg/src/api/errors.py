""" Mapping of gateway errors to HTTP responses. """

from typing import Dict, Tuple

from src.errors import (
    ArgumentError,
    FormatError,
    LangError,
    MethodNotAllowed,
    NotFoundError,
    PayloadTooLarge,
    Redirect,
    ResourceError,
    UnsupportedMediaType,
)

# Status codes in matching order, subclasses before their base classes.
STATUS_CODES = (
    (Redirect, 302),
    (ResourceError, 503),
    (LangError, 400),
    (ArgumentError, 400),
    (FormatError, 400),
    (NotFoundError, 404),
    (MethodNotAllowed, 405),
    (PayloadTooLarge, 413),
    (UnsupportedMediaType, 415),
)
# Reserved for deployments with a separate evaluation back end, never sent.
BACKEND_OFFLINE = 502
INTERNAL_ERROR = 500


def map_error(error: BaseException) -> Tuple[int, str, Dict[str, str]]:
    """
    Map an error to status code, text body and extra headers.

    :param error: The error.
    :return: Tuple (status, body, headers). The body ends with a newline,
        errors of failed RPCs append the console transcript.
    """
    for error_class, status in STATUS_CODES:
        if isinstance(error, error_class):
            headers = {}
            if isinstance(error, Redirect):
                headers["Location"] = error.location
            elif isinstance(error, MethodNotAllowed):
                headers["Allow"] = "GET, POST"
            return status, _body(error), headers
    return INTERNAL_ERROR, f"internal server error: {error}\n", {}


def _body(error: BaseException) -> str:
    console = getattr(error, "console", None)
    if console:
        return f"{error}\n\nIn call:\n{console}"
    return f"{error}\n"
