"""
The recording graphics device. Plotting builtins never draw pixels, they
append draw commands in user coordinates to the current page. Every page
becomes one GraphicsRecording when the evaluation finishes.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from src.errors import LangError
from src.values.graphics import DrawCommand, GraphicsRecording

NOMINAL_WIDTH = 640
NOMINAL_HEIGHT = 480
PADDING = 0.04


def padded_range(values: np.ndarray) -> Tuple[float, float]:
    """
    Compute the axis range of finite values, padded by 4% on each side.

    :param values: The data values, non-finite entries are ignored.
    :return: Tuple (low, high) with low < high.
    """
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return 0.0, 1.0
    low, high = float(finite.min()), float(finite.max())
    span = high - low
    if span == 0:
        span = abs(low) if low != 0 else 1.0
    return low - PADDING * span, high + PADDING * span


def pretty(low: float, high: float, n: int = 5) -> List[float]:
    """
    Equally spaced round values covering [low, high]. The step is 1, 2 or
    5 times a power of ten and gives about n intervals.

    :param low: Lower end of the range.
    :param high: Upper end of the range.
    :param n: Desired number of intervals.
    :return: Ascending tick values, the first <= low, the last >= high.
    """
    if high < low:
        low, high = high, low
    if high == low:
        half = 0.5 * abs(low) if low != 0 else 0.5
        low, high = low - half, high + half
    raw = (high - low) / max(n, 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = magnitude * 10
    for factor in (1, 2, 5, 10):
        if factor * magnitude >= raw * (1 - 1e-10):
            step = factor * magnitude
            break
    first = math.floor(low / step + 1e-10)
    last = math.ceil(high / step - 1e-10)
    return [_clean(k * step) for k in range(first, last + 1)]


def _clean(value: float) -> float:
    cleaned = float(f"{value:.12g}")
    return 0.0 if cleaned == 0 else cleaned


def axis_ticks(limits: Tuple[float, float]) -> List[float]:
    """
    Pretty tick positions that lie inside an axis range.

    :param limits: The axis range.
    :return: The ticks.
    """
    low, high = limits
    return [tick for tick in pretty(low, high) if low <= tick <= high]


def tick_label(value: float) -> str:
    return f"{value:.7g}"


class GraphicsDevice:
    """
    Collects draw commands page by page.
    """

    def __init__(self) -> None:
        self.pages = []

    def new_page(
        self, xlim: Tuple[float, float], ylim: Tuple[float, float]
    ) -> None:
        """
        Start a new page with a canvas and the data ranges of its plot
        region.

        :param xlim: Data range of the x axis.
        :param ylim: Data range of the y axis.
        """
        canvas = DrawCommand(
            "canvas", width=NOMINAL_WIDTH, height=NOMINAL_HEIGHT
        )
        self.pages.append(([canvas], xlim, ylim))

    def add(self, op: str, **params) -> None:
        """
        Append a draw command to the current page.

        :param op: The command name.
        :param params: The command parameters.
        :raise LangError: If no page has been started yet.
        """
        if not self.pages:
            raise LangError("eval", "plot.new has not been called yet")
        self.pages[-1][0].append(DrawCommand(op, **params))

    def axes(self) -> None:
        """
        Draw both axes of the current page with pretty ticks.
        """
        _, xlim, ylim = self.pages[-1]
        for side, limits in ((1, xlim), (2, ylim)):
            ticks = axis_ticks(limits)
            self.add(
                "axis",
                side=side,
                ticks=ticks,
                labels=[tick_label(tick) for tick in ticks],
            )

    @property
    def current(self) -> Optional[Tuple]:
        return self.pages[-1] if self.pages else None

    def recordings(self) -> List[GraphicsRecording]:
        """
        Freeze all pages into recordings.

        :return: One recording per page, in drawing order.
        """
        return [
            GraphicsRecording(commands, xlim, ylim)
            for commands, xlim, ylim in self.pages
        ]
