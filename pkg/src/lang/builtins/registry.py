"""
The builtin registry. Builtins are plain python functions registered with
the builtin decorator, which records the formal parameters, the manual
title and whether the result is returned invisibly.
"""

from typing import Callable, Dict, Optional, Tuple

REQUIRED = object()
DOTS = "..."


class BuiltinSpec:
    """
    A registered builtin function.
    """

    def __init__(
        self,
        name: str,
        function: Callable,
        params: Tuple,
        title: str,
        invisible: bool,
        arguments: Dict[str, str],
        description: str,
    ) -> None:
        """
        Create the spec.

        :param name: Name the builtin is bound to.
        :param function: The implementation, called with the context and
            one keyword argument per formal ("dots" for "...").
        :param params: Formal parameters as (name, default) pairs, the
            default is REQUIRED for required arguments.
        :param title: One line description for the manual.
        :param invisible: Whether results are not echoed at top level.
        :param arguments: Description per formal parameter.
        :param description: Longer description for the manual.
        """
        self.name = name
        self.function = function
        self.params = params
        self.title = title
        self.invisible = invisible
        self.arguments = arguments
        self.description = description

    @property
    def formals(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.params)

    def __repr__(self) -> str:
        return f"<BuiltinSpec {self.name}>"


BUILTINS: Dict[str, BuiltinSpec] = {}


def builtin(
    name: str,
    params: Tuple = (),
    title: str = "",
    invisible: bool = False,
    arguments: Optional[Dict[str, str]] = None,
    description: str = "",
) -> Callable:
    """
    Decorator registering a builtin function.

    :param name: Name the builtin is bound to.
    :param params: Formal parameters, plain names are required.
    :param title: One line description for the manual.
    :param invisible: Whether results are not echoed at top level.
    :param arguments: Description per formal parameter.
    :param description: Longer description for the manual.
    :return: The decorator.
    """
    formals = tuple(
        (param, REQUIRED) if isinstance(param, str) else tuple(param)
        for param in params
    )

    def register(function: Callable) -> Callable:
        if name in BUILTINS:
            raise ValueError(f'Builtin "{name}" registered twice!')
        BUILTINS[name] = BuiltinSpec(
            name,
            function,
            formals,
            title,
            invisible,
            dict(arguments or {}),
            description,
        )
        return function

    return register


class BuiltinFactory:
    """
    Factory looking up registered builtins
    """

    @staticmethod
    def get(name: str) -> BuiltinSpec:
        """
        Return the spec of a builtin.

        :param name: The builtin name.
        :raise ValueError: If no builtin of that name exists.
        :return: The spec.
        """
        if name not in BUILTINS:
            raise ValueError(f'Builtin "{name}" does not exist!')
        return BUILTINS[name]

    @staticmethod
    def names() -> Tuple[str, ...]:
        return tuple(sorted(BUILTINS.keys()))
