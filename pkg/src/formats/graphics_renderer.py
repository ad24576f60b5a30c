"""
Renderers turning graphics recordings into svg documents and png images.

Both renderers share one layout: the plot region leaves fixed fractions
of the canvas as margins for the axes and the title, user coordinates are
mapped linearly from the recorded data ranges, and sizes recorded for the
nominal 640 x 480 canvas scale with the smaller of both ratios.
"""

import io
from abc import ABC, abstractmethod
from typing import List, Tuple
from xml.sax.saxutils import escape, quoteattr

from PIL import Image, ImageColor, ImageDraw, ImageFont

from src.lang.graphics import NOMINAL_HEIGHT, NOMINAL_WIDTH
from src.values.graphics import DrawCommand, GraphicsRecording

MARGINS = {"left": 0.125, "right": 0.04, "top": 0.1, "bottom": 0.125}
TICK_LENGTH = 6.0
LABEL_SIZE = 12.0
TITLE_SIZE = 16.0
FALLBACK_COLOR = "black"


def normalize_color(color: str) -> str:
    """
    Map unknown colour names to black.

    :param color: A colour name or #rrggbb value.
    :return: The colour, or "black" if neither renderer understands it.
    """
    try:
        ImageColor.getrgb(color)
    except ValueError:
        return FALLBACK_COLOR
    return color


class Layout:
    """
    Coordinate mapping of one recording rendered at a given size.
    """

    def __init__(
        self, recording: GraphicsRecording, width: int, height: int
    ) -> None:
        self.width = width
        self.height = height
        self.scale = min(width / NOMINAL_WIDTH, height / NOMINAL_HEIGHT)
        self.left = MARGINS["left"] * width
        self.right = width - MARGINS["right"] * width
        self.top = MARGINS["top"] * height
        self.bottom = height - MARGINS["bottom"] * height
        self.xlim = recording.xlim
        self.ylim = recording.ylim

    def x(self, value: float) -> float:
        low, high = self.xlim
        span = (high - low) or 1.0
        return self.left + (value - low) / span * (self.right - self.left)

    def y(self, value: float) -> float:
        low, high = self.ylim
        span = (high - low) or 1.0
        return self.bottom - (value - low) / span * (self.bottom - self.top)

    def point(self, x: float, y: float) -> Tuple[float, float]:
        return self.x(x), self.y(y)


class GraphicsRenderer(ABC):
    """
    Interface of the renderers.
    """

    def __init__(self, name: str) -> None:
        self.name = name

    @abstractmethod
    def render(
        self, recording: GraphicsRecording, width: int, height: int
    ) -> bytes:
        """
        Render a recording.

        :param recording: The recording.
        :param width: Output width in pixels.
        :param height: Output height in pixels.
        :return: The encoded document or image.
        """
        raise NotImplementedError("Abstract method!")  # pragma: no cover


def _fmt(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


class SvgRenderer(GraphicsRenderer):
    """
    Canonical svg: one element per draw command in recording order, fixed
    attribute order, coordinates with two decimals.
    """

    def __init__(self) -> None:
        super().__init__("svg")

    def render(
        self, recording: GraphicsRecording, width: int, height: int
    ) -> bytes:
        layout = Layout(recording, width, height)
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
        ]
        for command in recording.commands:
            lines.extend(self._element(command, layout))
        lines.append("</svg>")
        return ("\n".join(lines) + "\n").encode("utf-8")

    def _element(self, command: DrawCommand, layout: Layout) -> List[str]:
        op = command.op
        if op == "canvas":
            return []
        if op == "points":
            radius = _fmt(command["radius"] * layout.scale)
            color = quoteattr(normalize_color(command["color"]))
            return [
                f'<circle cx="{_fmt(layout.x(x))}" cy="{_fmt(layout.y(y))}" '
                f'r="{radius}" fill={color}/>'
                for x, y in zip(command["xs"], command["ys"])
            ]
        if op == "polyline":
            points = " ".join(
                f"{_fmt(layout.x(x))},{_fmt(layout.y(y))}"
                for x, y in zip(command["xs"], command["ys"])
            )
            color = quoteattr(normalize_color(command["color"]))
            stroke = _fmt(command["width"] * layout.scale)
            return [
                f'<polyline points="{points}" fill="none" stroke={color} '
                f'stroke-width="{stroke}"/>'
            ]
        if op == "rect":
            x0, y0 = layout.point(command["x0"], command["y0"])
            x1, y1 = layout.point(command["x1"], command["y1"])
            fill = quoteattr(normalize_color(command["fill"]))
            return [
                f'<rect x="{_fmt(min(x0, x1))}" y="{_fmt(min(y0, y1))}" '
                f'width="{_fmt(abs(x1 - x0))}" '
                f'height="{_fmt(abs(y1 - y0))}" fill={fill} '
                'stroke="black"/>'
            ]
        if op == "axis":
            return self._axis(command, layout)
        if op == "text":
            size = _fmt(command["size"] * layout.scale)
            return [
                f'<text x="{_fmt(layout.x(command["x"]))}" '
                f'y="{_fmt(layout.y(command["y"]))}" font-size="{size}" '
                f'text-anchor={quoteattr(command["anchor"])}>'
                f'{escape(command["string"])}</text>'
            ]
        size = _fmt(TITLE_SIZE * layout.scale)
        return [
            f'<text x="{_fmt(layout.width / 2)}" '
            f'y="{_fmt(layout.top / 2)}" font-size="{size}" '
            f'font-weight="bold" text-anchor="middle">'
            f'{escape(command["string"])}</text>'
        ]

    def _axis(self, command: DrawCommand, layout: Layout) -> List[str]:
        ticks = command["ticks"]
        if not ticks:
            return []
        tick = TICK_LENGTH * layout.scale
        size = _fmt(LABEL_SIZE * layout.scale)
        elements = []
        if command["side"] == 1:
            base = layout.bottom
            first, last = layout.x(ticks[0]), layout.x(ticks[-1])
            elements.append(
                f'<line x1="{_fmt(first)}" y1="{_fmt(base)}" '
                f'x2="{_fmt(last)}" y2="{_fmt(base)}" stroke="black"/>'
            )
            for value, label in zip(ticks, command["labels"]):
                x = _fmt(layout.x(value))
                elements.append(
                    f'<line x1="{x}" y1="{_fmt(base)}" x2="{x}" '
                    f'y2="{_fmt(base + tick)}" stroke="black"/>'
                )
                elements.append(
                    f'<text x="{x}" y="{_fmt(base + tick + 2.5 * tick)}" '
                    f'font-size="{size}" text-anchor="middle">'
                    f"{escape(label)}</text>"
                )
        else:
            base = layout.left
            first, last = layout.y(ticks[0]), layout.y(ticks[-1])
            elements.append(
                f'<line x1="{_fmt(base)}" y1="{_fmt(first)}" '
                f'x2="{_fmt(base)}" y2="{_fmt(last)}" stroke="black"/>'
            )
            for value, label in zip(ticks, command["labels"]):
                y = _fmt(layout.y(value))
                elements.append(
                    f'<line x1="{_fmt(base)}" y1="{y}" '
                    f'x2="{_fmt(base - tick)}" y2="{y}" stroke="black"/>'
                )
                elements.append(
                    f'<text x="{_fmt(base - 1.5 * tick)}" y="{y}" '
                    f'font-size="{size}" text-anchor="end">'
                    f"{escape(label)}</text>"
                )
        return elements


def _label(draw, font, xy, text: str, align: float = 0.5) -> None:
    """
    Draw text horizontally aligned at a point: 0.5 centres it, 1.0 ends it
    at the point.
    """
    width = draw.textlength(text, font=font)
    draw.text((xy[0] - align * width, xy[1]), text, fill="black", font=font)


class PngRenderer(GraphicsRenderer):
    """
    Raster rendering with Pillow on a white background.
    """

    def __init__(self) -> None:
        super().__init__("png")

    def render(
        self, recording: GraphicsRecording, width: int, height: int
    ) -> bytes:
        layout = Layout(recording, width, height)
        image = Image.new("RGB", (width, height), "white")
        draw = ImageDraw.Draw(image)
        font = ImageFont.load_default()
        for command in recording.commands:
            self._draw(draw, font, command, layout)
        buffer = io.BytesIO()
        image.save(buffer, format="PNG")
        return buffer.getvalue()

    @staticmethod
    def _draw(draw, font, command: DrawCommand, layout: Layout) -> None:
        op = command.op
        if op == "points":
            radius = command["radius"] * layout.scale
            color = normalize_color(command["color"])
            for x, y in zip(command["xs"], command["ys"]):
                px, py = layout.point(x, y)
                draw.ellipse(
                    (px - radius, py - radius, px + radius, py + radius),
                    fill=color,
                )
        elif op == "polyline":
            points = [
                layout.point(x, y)
                for x, y in zip(command["xs"], command["ys"])
            ]
            draw.line(
                points,
                fill=normalize_color(command["color"]),
                width=max(int(round(command["width"] * layout.scale)), 1),
            )
        elif op == "rect":
            x0, y0 = layout.point(command["x0"], command["y0"])
            x1, y1 = layout.point(command["x1"], command["y1"])
            draw.rectangle(
                (min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1)),
                fill=normalize_color(command["fill"]),
                outline="black",
            )
        elif op == "axis" and command["ticks"]:
            ticks = command["ticks"]
            tick = TICK_LENGTH * layout.scale
            for value, label in zip(ticks, command["labels"]):
                if command["side"] == 1:
                    x = layout.x(value)
                    draw.line(
                        [(x, layout.bottom), (x, layout.bottom + tick)],
                        fill="black",
                    )
                    _label(draw, font, (x, layout.bottom + 2 * tick), label)
                else:
                    y = layout.y(value)
                    draw.line(
                        [(layout.left, y), (layout.left - tick, y)],
                        fill="black",
                    )
                    _label(
                        draw, font, (layout.left - 1.5 * tick, y), label, 1.0
                    )
            if command["side"] == 1:
                ends = [
                    (layout.x(ticks[0]), layout.bottom),
                    (layout.x(ticks[-1]), layout.bottom),
                ]
            else:
                ends = [
                    (layout.left, layout.y(ticks[0])),
                    (layout.left, layout.y(ticks[-1])),
                ]
            draw.line(ends, fill="black")
        elif op == "text":
            draw.text(
                layout.point(command["x"], command["y"]),
                command["string"],
                fill="black",
                font=font,
            )
        elif op == "title":
            centre = (layout.width / 2, layout.top / 2)
            _label(draw, font, centre, command["string"])


class RendererFactory:
    """
    Factory for the graphics renderers.
    """

    @staticmethod
    def get(name: str) -> GraphicsRenderer:
        """
        Get a renderer by its format name.

        :param name: "svg" or "png".
        :raise ValueError: For unknown names.
        :return: The renderer.
        """
        if name == "svg":
            return SvgRenderer()
        elif name == "png":
            return PngRenderer()
        else:
            raise ValueError(f'Renderer "{name}" does not exist!')
