""" Logging functionality is implemented in this package. """

from .evaluation_logger import EvaluationLogger  # noqa: F401
from .server_logger import ServerLogger  # noqa: F401
from .standard_logger import StandardLogger  # noqa: F401
