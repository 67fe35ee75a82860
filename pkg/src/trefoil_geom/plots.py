"""Region data for the surgery plots P1 (points (rp, rq)) and P2 (points S(m, n)).

Output is deterministic: fixed row order, fixed colors, 17 significant digits.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from trefoil_geom import kernels
from trefoil_geom.errors import GeometryError

CLASS_NAMES = {kernels.SL2R: "sl2r", kernels.NIL: "nil", kernels.SPHERICAL: "spherical", kernels.UNKNOWN: "unknown"}

COLORS = {
    "sl2r": "#9ecae1",
    "nil": "#31a354",
    "spherical": "#fdae6b",
    "unknown": "#e0e0e0",
    "line_L": "#08519c",
    "line_U": "#a63603",
    "marker": "#000000",
}

# P1 is classified on the lines themselves with this absolute tolerance.
P1_TOL = 1e-12


class Which(enum.Enum):
    P1 = "p1"
    P2 = "p2"


@dataclass(frozen=True)
class Window:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise GeometryError("plot window must have positive area")

    @classmethod
    def parse(cls, text: str) -> "Window":
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 4:
            raise GeometryError("window is x0,x1,y0,y1")
        return cls(*parts)


DEFAULT_WINDOWS = {Which.P1: Window(-12.0, 12.0, 0.0, 4.0), Which.P2: Window(0.0, 12.0, 0.0, 6.0)}
DEFAULT_RESOLUTION = {Which.P1: (49, 17), Which.P2: None}


def fmt(v: float) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v == 0:
        return "0"
    return format(v, ".17g")


@dataclass(frozen=True)
class PlotLine:
    name: str
    a: float
    b: float
    c: float  # a x + b y = c


@dataclass
class Regions:
    which: Which
    window: Window
    rows: list
    lines: list
    markers: list
    cell: tuple = (1.0, 1.0)


def p2_class(m: float) -> str:
    m = abs(m)
    if m > 6:
        return "sl2r"
    if m == 6:
        return "nil"
    if m > 1.2:
        return "spherical"
    return "unknown"


def plot_regions(which: Which, window: Window | None = None, resolution=None, backend=None) -> Regions:
    impl = kernels if backend is None else backend
    window = window or DEFAULT_WINDOWS[which]
    if which is Which.P1:
        nx, ny = resolution or DEFAULT_RESOLUTION[Which.P1]
        if nx < 2 or ny < 2:
            raise GeometryError("resolution must be at least 2 x 2")
        xs = window.x0 + (window.x1 - window.x0) * np.arange(nx) / (nx - 1)
        ys = window.y0 + (window.y1 - window.y0) * np.arange(ny) / (ny - 1)
        X, Y = np.meshgrid(xs, ys)
        codes = impl.classify_p1(X.ravel(), Y.ravel(), P1_TOL)
        rows = [(float(x), float(y), CLASS_NAMES[int(c)]) for x, y, c in zip(X.ravel(), Y.ravel(), codes)]
        lines = [
            PlotLine("L+", 1.0, 6.0, 6.0),
            PlotLine("L-", 1.0, 6.0, -6.0),
            PlotLine("U+", 1.0, 6.0, 1.2),
            PlotLine("U-", 1.0, 6.0, -1.2),
        ]
        markers = [
            (x, y)
            for y in range(math.ceil(window.y0), math.floor(window.y1) + 1)
            for x in range(math.ceil(window.x0), math.floor(window.x1) + 1)
            if y >= 0 and math.gcd(x, y) == 1
        ]
        cell = ((window.x1 - window.x0) / (nx - 1), (window.y1 - window.y0) / (ny - 1))
        return Regions(which, window, rows, lines, markers, cell)
    rows = []
    for n in range(math.ceil(window.y0), math.floor(window.y1) + 1):
        for m in range(math.ceil(window.x0), math.floor(window.x1) + 1):
            rows.append((m, n, p2_class(m), int(math.gcd(m, n) == 1)))
    lines = [PlotLine("U", 1.0, 0.0, 1.2), PlotLine("L", 1.0, 0.0, 6.0)]
    markers = [(m, n) for m, n, _, marked in rows if marked]
    return Regions(which, window, rows, lines, markers)


def non_geodesic_fiber(m: int, n: int) -> bool:
    """S(1, n) lies in the spherical band but its (1, n) fiber is not a geodesic."""
    return abs(m) == 1


def to_csv(reg: Regions) -> str:
    buf = io.StringIO()
    if reg.which is Which.P1:
        buf.write("x,y,class\n")
        for x, y, c in reg.rows:
            buf.write(f"{fmt(x)},{fmt(y)},{c}\n")
    else:
        buf.write("m,n,class,marked\n")
        for m, n, c, marked in reg.rows:
            buf.write(f"{m},{n},{c},{marked}\n")
    return buf.getvalue()


def _clip_line(line: PlotLine, w: Window):
    pts = []
    if line.b != 0:
        for x in (w.x0, w.x1):
            y = (line.c - line.a * x) / line.b
            if w.y0 <= y <= w.y1:
                pts.append((x, y))
    if line.a != 0:
        for y in (w.y0, w.y1):
            x = (line.c - line.b * y) / line.a
            if w.x0 <= x <= w.x1:
                pts.append((x, y))
    uniq = sorted(set(pts))
    if len(uniq) < 2:
        return None
    return uniq[0], uniq[-1]


def to_svg(reg: Regions) -> str:
    w = reg.window
    width, height = w.x1 - w.x0, w.y1 - w.y0
    unit = max(width, height) / 200.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(w.x0)} {fmt(-w.y1)} {fmt(width)} {fmt(height)}" '
        f'width="800" height="{fmt(round(800 * height / width))}">',
        '<g id="regions" stroke="none">',
    ]
    if reg.which is Which.P1:
        dx, dy = reg.cell
        for x, y, c in reg.rows:
            out.append(
                f'<rect x="{fmt(x - dx / 2)}" y="{fmt(-y - dy / 2)}" width="{fmt(dx)}" height="{fmt(dy)}" '
                f'fill="{COLORS[c]}"/>'
            )
    else:
        for m, n, c, _ in reg.rows:
            out.append(f'<rect x="{fmt(m - 0.5)}" y="{fmt(-n - 0.5)}" width="1" height="1" fill="{COLORS[c]}"/>')
    out.append("</g>")
    out.append('<g id="lines" fill="none">')
    for line in reg.lines:
        seg = _clip_line(line, w)
        if seg is None:
            continue
        (xa, ya), (xb, yb) = seg
        color = COLORS["line_L"] if line.name.startswith("L") else COLORS["line_U"]
        dash = ' stroke-dasharray="{0} {0}"'.format(fmt(4 * unit)) if reg.which is Which.P2 else ""
        out.append(
            f'<line id="{line.name}" x1="{fmt(xa)}" y1="{fmt(-ya)}" x2="{fmt(xb)}" y2="{fmt(-yb)}" '
            f'stroke="{color}" stroke-width="{fmt(unit)}"{dash}/>'
        )
    out.append("</g>")
    out.append(f'<g id="markers" fill="{COLORS["marker"]}">')
    r = 1.5 * unit
    for x, y in reg.markers:
        out.append(
            f'<path d="M{fmt(x)} {fmt(-y - r)}L{fmt(x + r)} {fmt(-y)}L{fmt(x)} {fmt(-y + r)}L{fmt(x - r)} {fmt(-y)}Z"/>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(reg: Regions, fmt_name: str) -> str:
    if fmt_name == "csv":
        return to_csv(reg)
    if fmt_name == "svg":
        return to_svg(reg)
    raise GeometryError(f"plots support csv and svg, not {fmt_name!r}")
