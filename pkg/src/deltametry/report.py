"""Distance-distribution summaries, heatmaps, and tabular exports.

The distribution view splits all document pairs into intra-author and
inter-author distances and can highlight the cross pairs of one author
pair (e.g. the pseudonym hypothesis pair), showing where they fall inside
the inter-author zone.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .corpus import DocumentId, parse_document_id
from .delta import DistanceMatrix
from .errors import EmptyTableError, TableParseError, UnknownAuthorError
from .svgutil import (
    HIGHLIGHT_COLOR,
    INTER_COLOR,
    INTRA_COLOR,
    SvgCanvas,
    heat_color,
)

__all__ = [
    "DistanceDistribution",
    "distance_distribution",
    "render_distribution_svg",
    "render_heatmap_svg",
    "export_distance_csv",
    "read_distance_csv",
]

Pair = tuple[DocumentId, DocumentId]


def _ordered_pair(a: DocumentId, b: DocumentId) -> Pair:
    return (a, b) if a.raw <= b.raw else (b, a)


@dataclass(frozen=True)
class DistanceDistribution:
    intra: tuple[tuple[Pair, float], ...]
    inter: tuple[tuple[Pair, float], ...]
    highlight: frozenset[Pair]

    @property
    def highlight_distances(self) -> list[float]:
        by_pair = {p: d for p, d in self.intra + self.inter}
        return [by_pair[p] for p in sorted(self.highlight, key=lambda p: (p[0].raw, p[1].raw))]

    def mean_intra(self) -> float:
        return float(np.mean([d for _, d in self.intra]))

    def mean_inter(self) -> float:
        return float(np.mean([d for _, d in self.inter]))

    def mean_highlight(self) -> float:
        return float(np.mean(self.highlight_distances))


def distance_distribution(
    m: DistanceMatrix, highlight_authors: tuple[str, str] | None = None
) -> DistanceDistribution:
    """Partition all unordered document pairs by the same-author predicate."""
    authors = {d.author for d in m.doc_ids}
    if len(authors) < 2:
        raise UnknownAuthorError("need at least two authors for a distribution")
    if highlight_authors is not None:
        for a in highlight_authors:
            if a not in authors:
                raise UnknownAuthorError(a)

    intra, inter, highlight = [], [], set()
    for i in range(m.n):
        for j in range(i + 1, m.n):
            a, b = m.doc_ids[i], m.doc_ids[j]
            pair = _ordered_pair(a, b)
            entry = (pair, float(m.d[i, j]))
            (intra if a.author == b.author else inter).append(entry)
            if highlight_authors is not None and {a.author, b.author} == set(
                highlight_authors
            ):
                highlight.add(pair)
    key = lambda e: (e[0][0].raw, e[0][1].raw)
    return DistanceDistribution(
        intra=tuple(sorted(intra, key=key)),
        inter=tuple(sorted(inter, key=key)),
        highlight=frozenset(highlight),
    )


def _bin_edges(values: np.ndarray) -> np.ndarray:
    """Freedman-Diaconis bins with a fixed 30-bin fallback."""
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    q75, q25 = np.percentile(values, [75, 25])
    iqr = q75 - q25
    if iqr > 0:
        width = 2.0 * iqr / len(values) ** (1.0 / 3.0)
        nbins = max(1, min(200, math.ceil((hi - lo) / width)))
    else:
        nbins = 30
    return np.linspace(lo, hi, nbins + 1)


def render_distribution_svg(dist: DistanceDistribution, out) -> None:
    """Overlaid intra/inter histograms with highlighted pairs marked."""
    if not dist.intra and not dist.inter:
        raise EmptyTableError("empty distance distribution")
    all_d = np.array([d for _, d in dist.intra + dist.inter])
    edges = _bin_edges(all_d)
    intra_counts, _ = np.histogram([d for _, d in dist.intra], bins=edges)
    inter_counts, _ = np.histogram([d for _, d in dist.inter], bins=edges)
    peak = max(1, int(intra_counts.max(initial=0)), int(inter_counts.max(initial=0)))

    width, height = 640.0, 360.0
    ml, mr, mt, mb = 50.0, 20.0, 20.0, 60.0
    pw, ph = width - ml - mr, height - mt - mb
    lo, hi = float(edges[0]), float(edges[-1])

    def x_of(v):
        return ml + (v - lo) / (hi - lo) * pw

    def y_of(c):
        return mt + ph * (1.0 - c / peak)

    svg = SvgCanvas(width, height)
    svg.rect(0, 0, width, height, "#ffffff")
    for counts, color in ((inter_counts, INTER_COLOR), (intra_counts, INTRA_COLOR)):
        for k, c in enumerate(counts):
            if c == 0:
                continue
            x1, x2 = x_of(edges[k]), x_of(edges[k + 1])
            svg.rect(x1, y_of(c), x2 - x1, mt + ph - y_of(c), color, opacity=0.6)
    for pair, d in sorted(dist.intra + dist.inter, key=lambda e: (e[0][0].raw, e[0][1].raw)):
        if pair in dist.highlight:
            x = x_of(d)
            svg.line(x, mt, x, mt + ph, stroke=HIGHLIGHT_COLOR, width=1.5)
    svg.line(ml, mt + ph, ml + pw, mt + ph)
    svg.text(ml, height - 40, f"{lo:.4f}", size=10)
    svg.text(ml + pw, height - 40, f"{hi:.4f}", size=10, anchor="end")
    svg.text(ml, height - 22, "intra-author", size=11, fill=INTRA_COLOR)
    svg.text(ml + 110, height - 22, "inter-author", size=11, fill=INTER_COLOR)
    if dist.highlight:
        svg.text(ml + 220, height - 22, "highlighted pairs", size=11, fill=HIGHLIGHT_COLOR)
    svg.write(out)


def render_heatmap_svg(m: DistanceMatrix, out) -> None:
    """n x n colored grid with labels; diagonal sits at the color-scale minimum."""
    n = m.n
    vmax = float(m.d.max(initial=0.0)) or 1.0
    label_w = 8 + 6.5 * max(len(d.raw) for d in m.doc_ids)
    cell = 26.0
    margin = 10.0
    width = margin * 2 + label_w + n * cell
    height = margin * 2 + label_w + n * cell + 30

    svg = SvgCanvas(width, height)
    svg.rect(0, 0, width, height, "#ffffff")
    x0, y0 = margin + label_w, margin + label_w
    for i, doc in enumerate(m.doc_ids):
        svg.text(x0 - 4, y0 + i * cell + cell * 0.7, doc.raw, size=9, anchor="end")
        svg.text(
            x0 + i * cell + cell * 0.7,
            y0 - 4,
            doc.raw,
            size=9,
            anchor="start",
            rotate=-60.0,
        )
    for i in range(n):
        for j in range(n):
            svg.rect(
                x0 + j * cell,
                y0 + i * cell,
                cell,
                cell,
                heat_color(float(m.d[i, j]) / vmax),
                stroke="#dddddd",
            )
    legend_y = y0 + n * cell + 18
    svg.text(margin, legend_y, "min = 0.0000", size=11)
    svg.text(margin + 120, legend_y, f"max = {vmax:.4f}", size=11)
    svg.write(out)


def export_distance_csv(m: DistanceMatrix, out) -> None:
    """CSV with id header and label column, distances at 4 decimals.

    `out` may be a path or an open text file object.
    """
    if hasattr(out, "write"):
        _write_distance_csv(m, out)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        _write_distance_csv(m, fh)


def _write_distance_csv(m: DistanceMatrix, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow([""] + [d.raw for d in m.doc_ids])
    for i, doc in enumerate(m.doc_ids):
        writer.writerow([doc.raw] + [f"{m.d[i, j]:.4f}" for j in range(m.n)])


def read_distance_csv(path) -> DistanceMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise TableParseError(f"{path}: expected a header and at least one row")
    header = rows[0][1:]
    doc_ids = tuple(parse_document_id(lab) for lab in header)
    d = np.zeros((len(doc_ids), len(doc_ids)))
    for i, row in enumerate(rows[1:]):
        if parse_document_id(row[0]) != doc_ids[i]:
            raise TableParseError(f"row label {row[0]!r} does not match header", row=i + 1)
        for j, cell in enumerate(row[1:]):
            d[i, j] = float(cell)
    return DistanceMatrix(doc_ids=doc_ids, d=d)
