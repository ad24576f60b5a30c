"""
The builtin functions of the embedded language. Importing this package
registers every builtin in BUILTINS.
"""

from . import io, operators, plotting, statistics, vectors  # noqa: F401
from .registry import (  # noqa: F401
    BUILTINS,
    DOTS,
    REQUIRED,
    BuiltinFactory,
    BuiltinSpec,
)
