""" Plotting builtins writing to the recording graphics device. """

import math

import numpy as np

from src.errors import LangError
from src.lang.builtins.coercion import numeric, present, text
from src.lang.builtins.registry import builtin
from src.lang.graphics import padded_range, pretty
from src.values.value import NULL, ListValue, Vector, numbers, string

POINT_RADIUS = 3.0
LINE_WIDTH = 1.5


@builtin(
    "plot",
    params=(
        "x",
        ("y", NULL),
        ("type", string("p")),
        ("main", NULL),
        ("col", string("black")),
    ),
    title="Scatter and line plots",
    invisible=True,
    arguments={
        "x": "The x coordinates, or the y values if y is missing.",
        "y": "The y coordinates.",
        "type": '"p" for points, "l" for lines, "b" for both.',
        "main": "Optional title.",
        "col": "Colour of the points or lines.",
    },
    description="Starts a new page with axes covering the data, padded "
    "by 4% on every side.",
)
def plot(ctx, x, y, type, main, col):
    xs = numeric(x, "'x'")
    if y is NULL:
        ys = xs
        xs = Vector("number", np.arange(1, len(ys) + 1, dtype=np.float64))
    else:
        ys = numeric(y, "'y'")
    if len(xs) != len(ys):
        raise LangError("eval", "'x' and 'y' lengths differ")
    kind = text(type, "type")
    if kind not in ("p", "l", "b"):
        raise LangError("eval", f"invalid plot type '{kind}'")
    colour = text(col, "col")
    ctx.budget.charge(2 * len(xs) + 8)
    keep = present(xs) & present(ys)
    keep &= np.isfinite(xs.data) & np.isfinite(ys.data)
    px = [float(value) for value in xs.data[keep]]
    py = [float(value) for value in ys.data[keep]]
    xlim = padded_range(xs.data[keep])
    ctx.device.new_page(xlim, padded_range(ys.data[keep]))
    ctx.device.axes()
    if kind in ("l", "b") and len(px) > 1:
        ctx.device.add(
            "polyline", xs=px, ys=py, width=LINE_WIDTH, color=colour
        )
    if kind in ("p", "b") and px:
        ctx.device.add(
            "points", xs=px, ys=py, radius=POINT_RADIUS, color=colour
        )
    heading = text(main, "main", allow_null=True)
    if heading is not None:
        ctx.device.add("title", string=heading)
    return NULL


def _breaks(data: np.ndarray, breaks) -> np.ndarray:
    low, high = float(data.min()), float(data.max())
    if breaks is NULL:
        classes = math.ceil(math.log2(data.size) + 1)
        return np.array(pretty(low, high, classes))
    requested = numeric(breaks, "'breaks'")
    if len(requested) == 1:
        classes = int(requested.data[0])
        if classes < 1 or requested.na[0]:
            raise LangError("eval", "invalid number of 'breaks'")
        return np.array(pretty(low, high, classes))
    if requested.na.any() or not np.all(np.diff(requested.data) > 0):
        raise LangError("eval", "'breaks' are not strictly increasing")
    edges = requested.data
    if edges[0] > low or edges[-1] < high:
        raise LangError("eval", "'breaks' do not span the range of 'x'")
    return np.array(edges, dtype=np.float64)


@builtin(
    "hist",
    params=(
        "x",
        ("breaks", NULL),
        ("main", NULL),
        ("col", string("lightgray")),
    ),
    title="Histograms",
    invisible=True,
    arguments={
        "x": "A numeric vector, NA and NaN are ignored.",
        "breaks": "Explicit break points or a suggested number of cells. "
        "By default Sturges' rule chooses the number of cells.",
        "main": "Optional title.",
        "col": "Fill colour of the bars.",
    },
    description="Counts the values in right-closed cells, the lowest "
    "break is included in the first cell, draws the bars on a new page "
    "and returns the breaks, counts and mids invisibly.",
)
def hist(ctx, x, breaks, main, col):
    values = numeric(x, "'x'")
    data = values.data[present(values)]
    data = data[np.isfinite(data)]
    if data.size == 0:
        raise LangError("eval", "hist needs at least one finite value")
    colour = text(col, "col")
    edges = _breaks(data, breaks)
    ctx.budget.charge(3 * len(edges) + data.size)
    index = np.searchsorted(edges, data, side="left")
    cells = np.clip(index, 1, len(edges) - 1) - 1
    counts = np.bincount(cells, minlength=len(edges) - 1)
    mids = (edges[:-1] + edges[1:]) / 2
    ctx.device.new_page(
        padded_range(edges), padded_range(np.array([0.0, counts.max()]))
    )
    ctx.device.axes()
    for left, right, height in zip(edges[:-1], edges[1:], counts):
        ctx.device.add(
            "rect",
            x0=float(left),
            y0=0.0,
            x1=float(right),
            y1=float(height),
            fill=colour,
        )
    heading = text(main, "main", allow_null=True)
    if heading is not None:
        ctx.device.add("title", string=heading)
    return ListValue(
        [
            ("breaks", numbers(edges.tolist())),
            ("counts", numbers(float(item) for item in counts)),
            ("mids", numbers(mids.tolist())),
        ]
    )


@builtin(
    "title",
    params=("main",),
    title="Add a title to the current plot",
    invisible=True,
    arguments={"main": "The title text."},
)
def title(ctx, main):
    ctx.device.add("title", string=text(main, "main"))
    return NULL
