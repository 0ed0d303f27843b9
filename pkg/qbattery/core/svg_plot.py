# qbattery/core/svg_plot.py

"""
Minimal deterministic SVG line plots: one or more panels side by side, each with
axes, ticks, labels and a legend. Coordinates are written with fixed decimals so
identical data always produce identical bytes.
"""

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

SVG_NS = "http://www.w3.org/2000/svg"

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

PANEL_WIDTH = 420
PANEL_HEIGHT = 300
MARGIN_LEFT = 64
MARGIN_RIGHT = 16
MARGIN_TOP = 28
MARGIN_BOTTOM = 48
N_TICKS = 5


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    text = f"{value:.3g}"
    return "0" if text in ("-0", "0") else text


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    dashed: bool = False


@dataclass
class Panel:
    title: str
    series: List[Series] = field(default_factory=list)
    x_range: Optional[Tuple[float, float]] = None

    def data_x_range(self) -> Tuple[float, float]:
        if self.x_range is not None:
            return self.x_range
        xs = np.concatenate([s.x for s in self.series]) if self.series else np.zeros(1)
        return float(np.nanmin(xs)), float(np.nanmax(xs))

    def data_y_range(self) -> Tuple[float, float]:
        ys = [s.y[~np.isnan(s.y)] for s in self.series]
        ys = [y for y in ys if y.size]
        if not ys:
            return 0.0, 1.0
        flat = np.concatenate(ys)
        return float(flat.min()), float(flat.max())


def _padded(lo: float, hi: float) -> Tuple[float, float]:
    if hi - lo < 1e-12:
        return lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def shared_y_range(panels: Sequence[Panel]) -> Tuple[float, float]:
    """One y window covering every panel"""
    lows, highs = zip(*(p.data_y_range() for p in panels))
    return _padded(min(lows), max(highs))


def _segments(x: np.ndarray, y: np.ndarray) -> List[List[Tuple[float, float]]]:
    """Split a curve at NaN values so undefined points leave gaps"""
    segments: List[List[Tuple[float, float]]] = []
    current: List[Tuple[float, float]] = []
    for xi, yi in zip(x, y):
        if math.isnan(yi):
            if current:
                segments.append(current)
            current = []
        else:
            current.append((float(xi), float(yi)))
    if current:
        segments.append(current)
    return segments


class LinePlot:
    """Side-by-side panels sharing one y range (fixed, or fitted to all data)"""

    def __init__(
        self,
        panels: Sequence[Panel],
        x_label: str,
        y_label: str,
        y_range: Optional[Tuple[float, float]] = None,
    ):
        if not panels:
            raise ValueError("a plot needs at least one panel")
        self.panels = list(panels)
        self.x_label = x_label
        self.y_label = y_label
        self.y_range = y_range

    def _draw_panel(self, root: ET.Element, panel: Panel, offset_x: float, y_range):
        x_lo, x_hi = panel.data_x_range()
        if x_hi - x_lo < 1e-12:
            x_hi = x_lo + 1.0
        y_lo, y_hi = y_range
        left = offset_x + MARGIN_LEFT
        right = offset_x + PANEL_WIDTH - MARGIN_RIGHT
        top = MARGIN_TOP
        bottom = PANEL_HEIGHT - MARGIN_BOTTOM

        def px(x: float) -> float:
            return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

        def py(y: float) -> float:
            return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

        group = ET.SubElement(root, "g", {"class": "panel"})
        ET.SubElement(
            group,
            "rect",
            x=_fmt(left),
            y=_fmt(top),
            width=_fmt(right - left),
            height=_fmt(bottom - top),
            fill="none",
            stroke="#000000",
        )
        title = ET.SubElement(
            group, "text", x=_fmt((left + right) / 2), y=_fmt(top - 10)
        )
        title.set("text-anchor", "middle")
        title.text = panel.title

        for i in range(N_TICKS):
            frac = i / (N_TICKS - 1)
            xv = x_lo + frac * (x_hi - x_lo)
            yv = y_lo + frac * (y_hi - y_lo)
            ET.SubElement(
                group, "line", x1=_fmt(px(xv)), y1=_fmt(bottom),
                x2=_fmt(px(xv)), y2=_fmt(bottom + 5), stroke="#000000",
            )
            xt = ET.SubElement(group, "text", x=_fmt(px(xv)), y=_fmt(bottom + 18))
            xt.set("text-anchor", "middle")
            xt.set("font-size", "11")
            xt.text = _tick_label(xv)
            ET.SubElement(
                group, "line", x1=_fmt(left - 5), y1=_fmt(py(yv)),
                x2=_fmt(left), y2=_fmt(py(yv)), stroke="#000000",
            )
            yt = ET.SubElement(group, "text", x=_fmt(left - 8), y=_fmt(py(yv) + 4))
            yt.set("text-anchor", "end")
            yt.set("font-size", "11")
            yt.text = _tick_label(yv)

        xl = ET.SubElement(
            group, "text", x=_fmt((left + right) / 2), y=_fmt(PANEL_HEIGHT - 10)
        )
        xl.set("text-anchor", "middle")
        xl.text = self.x_label
        yl = ET.SubElement(
            group,
            "text",
            x=_fmt(offset_x + 14),
            y=_fmt((top + bottom) / 2),
            transform=f"rotate(-90 {_fmt(offset_x + 14)} {_fmt((top + bottom) / 2)})",
        )
        yl.set("text-anchor", "middle")
        yl.text = self.y_label

        for idx, s in enumerate(panel.series):
            colour = PALETTE[idx % len(PALETTE)]
            for segment in _segments(s.x, s.y):
                points = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in segment)
                line = ET.SubElement(
                    group, "polyline", points=points, fill="none", stroke=colour
                )
                line.set("stroke-width", "1.5")
                if s.dashed:
                    line.set("stroke-dasharray", "6 3")

            ly = top + 14 + 16 * idx
            ET.SubElement(
                group, "line", x1=_fmt(right - 110), y1=_fmt(ly - 4),
                x2=_fmt(right - 90), y2=_fmt(ly - 4), stroke=colour,
            )
            legend = ET.SubElement(group, "text", x=_fmt(right - 86), y=_fmt(ly))
            legend.set("font-size", "11")
            legend.text = s.label

    def to_element(self) -> ET.Element:
        width = PANEL_WIDTH * len(self.panels)
        root = ET.Element(
            "svg",
            xmlns=SVG_NS,
            version="1.1",
            width=f"{width}px",
            height=f"{PANEL_HEIGHT}px",
            viewBox=f"0 0 {width} {PANEL_HEIGHT}",
        )
        y_range = self.y_range or shared_y_range(self.panels)
        for i, panel in enumerate(self.panels):
            self._draw_panel(root, panel, i * PANEL_WIDTH, y_range)
        return root

    def to_bytes(self) -> bytes:
        return ET.tostring(self.to_element(), encoding="utf-8", xml_declaration=True)

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_bytes())
        return path
