""" Exception hierarchy shared by every part of the gateway. """

from typing import Optional, Tuple


class GatewayError(Exception):
    """
    Base class for all errors raised on purpose by the gateway.
    Every error carries a non-empty, human-readable message.
    """

    def __init__(self, message: str) -> None:
        """
        Create the error.

        :param message: The human-readable error message.
        """
        if not message:
            message = self.__class__.__name__
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return self.message


class LangError(GatewayError):
    """
    Error raised by the embedded language: parsing, evaluation or numeric
    failures (e.g. rank deficiency).
    Errors of a failed RPC carry the console transcript up to the failure.
    """

    KINDS = ("parse", "eval", "numeric", "resource")

    def __init__(
        self,
        kind: str,
        message: str,
        location: Optional[Tuple[int, int]] = None,
    ) -> None:
        """
        Create a language error.

        :param kind: One of parse, eval, numeric or resource.
        :param message: The error message.
        :param location: Optional (line, column) of the offending code.
        """
        assert kind in self.KINDS
        if location is not None:
            message = f"{message} (line {location[0]}, column {location[1]})"
        super().__init__(message)
        self.kind = kind
        self.location = location
        self.console: Optional[str] = None


class ResourceError(LangError):
    """
    Raised when a budget is exhausted: wall clock deadline, value cells,
    call depth or session size. The message names the exhausted budget.
    """

    def __init__(self, budget: str, message: str) -> None:
        """
        Create a resource error.

        :param budget: Name of the exhausted budget, e.g. "cell limit".
        :param message: The error message.
        """
        super().__init__("resource", message)
        self.budget = budget


class EvaluatorCrash(ResourceError):
    """
    Unexpected failure inside the evaluator. Treated like a back-end failure.
    """

    def __init__(self, message: str) -> None:
        super().__init__("evaluator", f"evaluator failure: {message}")


class ArgumentError(GatewayError):
    """
    Raised when an RPC argument cannot be imported.
    """

    def __init__(self, field: str, message: str) -> None:
        """
        Create an argument error.

        :param field: Name of the offending argument field.
        :param message: Explanation of the failure.
        """
        super().__init__(f'argument "{field}": {message}')
        self.field = field


class FormatError(GatewayError):
    """
    Raised for inapplicable export formats, bad formatting parameters and
    corrupt serialized data.
    """


class NotFoundError(GatewayError):
    """
    Raised when a container, object, index or file does not exist.
    """


class LoadError(GatewayError):
    """
    Raised when a package directory cannot be loaded. Names the file.
    """

    def __init__(self, path: str, message: str) -> None:
        """
        Create a load error.

        :param path: The file or directory that failed to load.
        :param message: Explanation of the failure.
        """
        super().__init__(f"{path}: {message}")
        self.path = path


class MethodNotAllowed(GatewayError):
    """
    Raised for HTTP methods other than GET and POST, or for a method that
    does not apply to the target.
    """


class UnsupportedMediaType(GatewayError):
    """
    Raised for POST bodies with a content type the server does not accept.
    """


class PayloadTooLarge(GatewayError):
    """
    Raised when a request body exceeds the configured limit.
    """


class Redirect(GatewayError):
    """
    Not an error in the usual sense: signals a redirect to a normalized
    location (directory paths without trailing slash).
    """

    def __init__(self, location: str) -> None:
        """
        Create the redirect.

        :param location: The location to redirect to.
        """
        super().__init__(f"Redirect to {location}")
        self.location = location
