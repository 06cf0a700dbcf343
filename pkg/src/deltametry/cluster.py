"""Agglomerative hierarchical clustering of documents with dendrogram export.

Clustering runs on a precomputed distance matrix via Lance-Williams
updates. The default Ward linkage applies the Lance-Williams Ward formula
directly to the raw dissimilarities (no squaring pre-step), the convention
of the reference cluster-analysis runs this package reproduces. Ties are
broken deterministically: among all minimal-distance cluster pairs, the
pair whose (smallest member id, smallest member id) key is lexicographically
least merges first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DocumentId
from .delta import DistanceMatrix
from .errors import InsufficientDataError, InvalidMatrixError, TableParseError
from .svgutil import SvgCanvas, author_colors

__all__ = [
    "Dendrogram",
    "LINKAGES",
    "hierarchical_cluster",
    "leaf_order",
    "dendrogram_to_newick",
    "parse_newick",
    "render_dendrogram_svg",
]

LINKAGES = ("ward", "average", "complete", "single")


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree. Node i < n is leaf i; node n+k is merge k.

    Each merge is (left, right, height) with left holding the
    lexicographically smallest leaf of the pair.
    """

    leaves: tuple[DocumentId, ...]
    merges: tuple[tuple[int, int, float], ...]

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def validate(self, tol: float = 1e-9) -> None:
        n = self.n_leaves
        if len(self.merges) != n - 1:
            raise InvalidMatrixError(
                f"{len(self.merges)} merges for {n} leaves, expected {n - 1}"
            )
        seen = set()
        for k, (a, b, h) in enumerate(self.merges):
            for node in (a, b):
                if node in seen or node >= n + k:
                    raise InvalidMatrixError(f"node {node} reused or premature")
                seen.add(node)
            if k > 0 and h < self.merges[k - 1][2] - tol:
                raise InvalidMatrixError("merge heights decrease")

    def clade_leafsets(self) -> list[tuple[frozenset[str], float]]:
        """(leaf id set, height) for every internal node."""
        n = self.n_leaves
        sets: list[frozenset[str]] = [frozenset([d.raw]) for d in self.leaves]
        out = []
        for a, b, h in self.merges:
            s = sets[a] | sets[b]
            sets.append(s)
            out.append((s, h))
        return out


def _lance_williams(linkage: str, ni: int, nj: int, nk: int):
    if linkage == "single":
        return 0.5, 0.5, 0.0, -0.5
    if linkage == "complete":
        return 0.5, 0.5, 0.0, 0.5
    if linkage == "average":
        s = ni + nj
        return ni / s, nj / s, 0.0, 0.0
    if linkage == "ward":
        s = ni + nj + nk
        return (ni + nk) / s, (nj + nk) / s, -nk / s, 0.0
    raise ValueError(f"unknown linkage {linkage!r}")


def hierarchical_cluster(m: DistanceMatrix, linkage: str = "ward") -> Dendrogram:
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; choose from {LINKAGES}")
    n = m.n
    if n < 2:
        raise InsufficientDataError("clustering needs >= 2 documents")
    m.validate(tol=1e-9)

    # Cluster state keyed by node index (leaves 0..n-1, merges n..2n-2).
    size = {i: 1 for i in range(n)}
    minkey = {i: m.doc_ids[i].raw for i in range(n)}
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(m.d[i, j])
    active = set(range(n))
    merges: list[tuple[int, int, float]] = []

    for step in range(n - 1):
        best = None
        for (i, j), d in dist.items():
            key = (d,) + tuple(sorted((minkey[i], minkey[j])))
            if best is None or key < best[0]:
                best = (key, i, j, d)
        _, i, j, d = best
        new = n + step
        size[new] = size[i] + size[j]
        minkey[new] = min(minkey[i], minkey[j])
        left, right = (i, j) if minkey[i] <= minkey[j] else (j, i)
        merges.append((left, right, d))

        active.discard(i)
        active.discard(j)
        for k in sorted(active):
            ai, aj, beta, gamma = _lance_williams(linkage, size[i], size[j], size[k])
            dik = dist.pop((min(i, k), max(i, k)))
            djk = dist.pop((min(j, k), max(j, k)))
            dist[(k, new)] = ai * dik + aj * djk + beta * d + gamma * abs(dik - djk)
        del dist[(i, j)]
        active.add(new)

    return Dendrogram(leaves=m.doc_ids, merges=tuple(merges))


def leaf_order(dend: Dendrogram) -> list[int]:
    """Leaf indices in left-to-right display order."""
    n = dend.n_leaves
    if n == 1:
        return [0]

    def walk(node: int) -> list[int]:
        if node < n:
            return [node]
        a, b, _ = dend.merges[node - n]
        return walk(a) + walk(b)

    return walk(2 * n - 2)


def _node_height(dend: Dendrogram, node: int) -> float:
    return 0.0 if node < dend.n_leaves else dend.merges[node - dend.n_leaves][2]


def dendrogram_to_newick(dend: Dendrogram) -> str:
    """Ultrametric Newick text; each merge height splits evenly over its two sides."""
    n = dend.n_leaves

    def emit(node: int, parent_height: float) -> str:
        branch = parent_height / 2.0 - _node_height(dend, node) / 2.0
        if node < n:
            return f"{dend.leaves[node].raw}:{branch:.12g}"
        a, b, h = dend.merges[node - n]
        return f"({emit(a, h)},{emit(b, h)}):{branch:.12g}"

    if n == 1:
        return f"{dend.leaves[0].raw};"
    a, b, h = dend.merges[-1]
    return f"({emit(a, h)},{emit(b, h)});"


class _NewickNode:
    __slots__ = ("label", "children", "branch")

    def __init__(self):
        self.label = ""
        self.children: list[_NewickNode] = []
        self.branch = 0.0


def _parse_newick_tree(text: str) -> _NewickNode:
    text = text.strip()
    if not text.endswith(";"):
        raise TableParseError("newick text must end with ';'")
    s = text[:-1]
    pos = 0

    def parse_node() -> _NewickNode:
        nonlocal pos
        node = _NewickNode()
        if pos < len(s) and s[pos] == "(":
            pos += 1
            node.children.append(parse_node())
            while pos < len(s) and s[pos] == ",":
                pos += 1
                node.children.append(parse_node())
            if pos >= len(s) or s[pos] != ")":
                raise TableParseError("unbalanced parentheses in newick text")
            pos += 1
        start = pos
        while pos < len(s) and s[pos] not in "():,;":
            pos += 1
        node.label = s[start:pos]
        if pos < len(s) and s[pos] == ":":
            pos += 1
            start = pos
            while pos < len(s) and s[pos] not in "():,;":
                pos += 1
            node.branch = float(s[start:pos])
        return node

    root = parse_node()
    if pos != len(s):
        raise TableParseError(f"trailing newick content at position {pos}")
    return root


def parse_newick(text: str) -> Dendrogram:
    """Parse ultrametric Newick text back into a Dendrogram."""
    root = _parse_newick_tree(text)
    from .corpus import parse_document_id

    leaves: list[DocumentId] = []
    internal: list[tuple[_NewickNode, float, list]] = []  # node, height, child keys

    def height_of(node: _NewickNode) -> float:
        if not node.children:
            return 0.0
        c = node.children[0]
        return 2.0 * (c.branch + height_of(c) / 2.0)

    def walk(node: _NewickNode):
        """Postorder; returns (kind, index) node key."""
        if not node.children:
            leaves.append(parse_document_id(node.label))
            return ("leaf", len(leaves) - 1)
        if len(node.children) != 2:
            raise TableParseError("dendrogram newick must be strictly binary")
        keys = [walk(c) for c in node.children]
        internal.append((node, height_of(node), keys))
        return ("internal", len(internal) - 1)

    walk(root)
    n = len(leaves)
    # Postorder is stable under an ascending-height sort, so children always
    # receive their final node index before their parent needs it.
    order = sorted(range(len(internal)), key=lambda k: internal[k][1])
    node_index: dict[tuple, int] = {("leaf", i): i for i in range(n)}
    merges = []
    raw_min: dict[int, str] = {i: d.raw for i, d in enumerate(leaves)}
    for rank, k in enumerate(order):
        node_index[("internal", k)] = n + rank
    for rank, k in enumerate(order):
        _, h, keys = internal[k]
        a, b = (node_index[key] for key in keys)
        raw_min[n + rank] = min(raw_min[a], raw_min[b])
        if raw_min[a] > raw_min[b]:
            a, b = b, a
        merges.append((a, b, h))
    return Dendrogram(leaves=tuple(leaves), merges=tuple(merges))


def render_dendrogram_svg(
    dend: Dendrogram, out, author_coloring: bool = True
) -> None:
    """Write a self-contained SVG dendrogram, leaves on the left."""
    n = dend.n_leaves
    order = leaf_order(dend)
    label_w = 10 + 7 * max(len(d.raw) for d in dend.leaves)
    row_h = 22.0
    plot_w = 420.0
    margin = 15.0
    width = margin * 2 + label_w + plot_w
    height = margin * 2 + row_h * n + 20

    max_h = max((h for _, _, h in dend.merges), default=1.0) or 1.0
    x0 = margin + label_w

    def x_of(h: float) -> float:
        return x0 + (h / max_h) * plot_w

    leaf_y = {leaf: margin + row_h * (pos + 0.5) for pos, leaf in enumerate(order)}
    colors = author_colors(d.author for d in dend.leaves)

    svg = SvgCanvas(width, height)
    svg.rect(0, 0, width, height, "#ffffff")
    for idx in order:
        doc = dend.leaves[idx]
        color = colors[doc.author] if author_coloring else "#000000"
        svg.text(margin, leaf_y[idx] + 4, doc.raw, size=11, fill=color)

    pos_y: dict[int, float] = {i: leaf_y[i] for i in leaf_y}
    for k, (a, b, h) in enumerate(dend.merges):
        xa = x_of(_node_height(dend, a))
        xb = x_of(_node_height(dend, b))
        xm = x_of(h)
        ya, yb = pos_y[a], pos_y[b]
        svg.line(xa, ya, xm, ya)
        svg.line(xb, yb, xm, yb)
        svg.line(xm, min(ya, yb), xm, max(ya, yb))
        pos_y[dend.n_leaves + k] = (ya + yb) / 2.0

    axis_y = margin + row_h * n + 10
    svg.line(x0, axis_y, x0 + plot_w, axis_y)
    svg.text(x0, axis_y + 12, "0", size=10)
    svg.text(x0 + plot_w, axis_y + 12, f"{max_h:.4f}", size=10, anchor="end")
    svg.write(out)
