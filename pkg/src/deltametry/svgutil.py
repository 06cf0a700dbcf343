"""Minimal deterministic SVG emission helpers (no external dependencies)."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

# Fixed qualitative palette; authors are assigned colors in sorted order.
PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)

INTRA_COLOR = "#4878a8"
INTER_COLOR = "#f4a6c0"  # the pink zone
HIGHLIGHT_COLOR = "#c0202a"


def fmt(x: float) -> str:
    """Fixed-format coordinate rendering so identical input gives identical bytes."""
    return f"{x:.2f}"


class SvgCanvas:
    def __init__(self, width: float, height: float):
        self.width = width
        self.height = height
        self._parts: list[str] = [
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" '
            f'height="{fmt(height)}" viewBox="0 0 {fmt(width)} {fmt(height)}">\n'
        ]

    def rect(self, x, y, w, h, fill, opacity=None, stroke=None):
        extra = ""
        if opacity is not None:
            extra += f' fill-opacity="{opacity}"'
        if stroke is not None:
            extra += f' stroke="{stroke}"'
        self._parts.append(
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" '
            f'fill="{fill}"{extra}/>\n'
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0):
        self._parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"/>\n'
        )

    def text(self, x, y, content, size=11.0, fill="#000000", anchor="start", rotate=None):
        transform = ""
        if rotate is not None:
            transform = f' transform="rotate({fmt(rotate)} {fmt(x)} {fmt(y)})"'
        self._parts.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{fmt(size)}" '
            f'font-family="sans-serif" fill="{fill}" text-anchor="{anchor}"'
            f"{transform}>{escape(content)}</text>\n"
        )

    def to_string(self) -> str:
        return "".join(self._parts) + "</svg>\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_string(), encoding="utf-8")


def heat_color(t: float) -> str:
    """Interpolate white (t=0) to dark red (t=1)."""
    t = min(max(t, 0.0), 1.0)
    r = round(255 + (139 - 255) * t)
    g = round(255 * (1.0 - t))
    b = round(255 * (1.0 - t))
    return f"#{r:02x}{g:02x}{b:02x}"


def author_colors(authors) -> dict[str, str]:
    ordered = sorted(set(authors))
    return {a: PALETTE[i % len(PALETTE)] for i, a in enumerate(ordered)}
