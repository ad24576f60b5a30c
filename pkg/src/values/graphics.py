"""
Graphics recordings: the ordered draw commands captured from one plot,
in abstract user coordinates, renderable at any size after the fact.
"""

from typing import Any, Dict, Iterable, Tuple

from src.values.value import Tag, Value

COMMANDS = {
    "canvas": ("width", "height"),
    "points": ("xs", "ys", "radius", "color"),
    "polyline": ("xs", "ys", "width", "color"),
    "rect": ("x0", "y0", "x1", "y1", "fill"),
    "axis": ("side", "ticks", "labels"),
    "text": ("x", "y", "string", "size", "anchor"),
    "title": ("string",),
}


class DrawCommand:
    """
    One draw command with its parameters in the fixed order of COMMANDS.
    """

    def __init__(self, op: str, **params: Any) -> None:
        """
        Create a draw command.

        :param op: The command name.
        :param params: The command parameters, all are required.
        :raise ValueError: If the command or its parameters are unknown.
        """
        if op not in COMMANDS:
            raise ValueError(f'Draw command "{op}" does not exist!')
        if set(params.keys()) != set(COMMANDS[op]):
            raise ValueError(f'Wrong parameters for draw command "{op}"!')
        self.op = op
        self.params = tuple(
            (name, _freeze(params[name])) for name in COMMANDS[op]
        )

    def __getitem__(self, name: str) -> Any:
        return dict(self.params)[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DrawCommand):
            return NotImplemented
        return self.op == other.op and self.params == other.params

    def __hash__(self) -> int:
        return hash((self.op, self.params))

    def __repr__(self) -> str:
        return f"<{self.op} {dict(self.params)}>"

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the command to a json compatible dictionary.

        :return: Dictionary with "op" and all parameters.
        """
        data = {"op": self.op}
        for name, value in self.params:
            data[name] = list(value) if isinstance(value, tuple) else value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DrawCommand":
        """
        Inverse of to_dict.

        :param data: The dictionary.
        :return: The draw command.
        """
        params = dict(data)
        op = params.pop("op")
        return cls(op, **params)


def _freeze(value: Any) -> Any:
    """
    Convert lists into tuples and numbers into floats so commands compare
    and hash by value.
    """
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(item) for item in value)
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return float(value)
    return value


class GraphicsRecording(Value):
    """
    Immutable list of draw commands together with the data ranges of the
    plot region.
    """

    tag = Tag.GRAPHIC

    def __init__(
        self,
        commands: Iterable[DrawCommand],
        xlim: Tuple[float, float] = (0.0, 1.0),
        ylim: Tuple[float, float] = (0.0, 1.0),
    ) -> None:
        """
        Create a recording.

        :param commands: The draw commands in order.
        :param xlim: Data range on the x axis.
        :param ylim: Data range on the y axis.
        """
        self.commands = tuple(commands)
        self.xlim = (float(xlim[0]), float(xlim[1]))
        self.ylim = (float(ylim[0]), float(ylim[1]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphicsRecording):
            return NotImplemented
        return (
            self.commands == other.commands
            and self.xlim == other.xlim
            and self.ylim == other.ylim
        )

    def __hash__(self) -> int:
        return hash((self.commands, self.xlim, self.ylim))

    def cells(self) -> int:
        return 1 + len(self.commands)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the recording to a json compatible dictionary.

        :return: Dictionary with xlim, ylim and commands.
        """
        return {
            "xlim": list(self.xlim),
            "ylim": list(self.ylim),
            "commands": [command.to_dict() for command in self.commands],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GraphicsRecording":
        """
        Inverse of to_dict.

        :param data: The dictionary.
        :return: The recording.
        """
        return cls(
            [DrawCommand.from_dict(item) for item in data["commands"]],
            tuple(data["xlim"]),
            tuple(data["ylim"]),
        )
