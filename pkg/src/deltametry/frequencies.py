"""Most-frequent-word relative-frequency tables and the stylo table format.

Frequencies are stored in percent of document tokens, the convention of the
published frequency datasets this package interoperates with. The stylo
table format is a whitespace-separated labeled numeric matrix with one
header row and one label column; files may be oriented either way
(documents as rows or words as rows) and orientation is auto-detected from
which label set looks like Author_Title identifiers.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .corpus import Document, DocumentId, parse_document_id
from .errors import (
    DegenerateDocumentError,
    EmptyTableError,
    OrientationError,
    TableParseError,
)

__all__ = [
    "FrequencyTable",
    "build_frequency_table",
    "read_stylo_table",
    "write_stylo_table",
    "select_mfw",
]

_DOC_LABEL_RE = re.compile(r"^[^_\s]+_\S+$")


@dataclass(frozen=True)
class FrequencyTable:
    """words in rank order x documents, values[d][w] in percent of tokens."""

    words: tuple[str, ...]
    doc_ids: tuple[DocumentId, ...]
    values: np.ndarray  # shape (len(doc_ids), len(words)), float64

    def __post_init__(self):
        object.__setattr__(
            self, "values", np.ascontiguousarray(self.values, dtype=np.float64)
        )
        if self.values.shape != (len(self.doc_ids), len(self.words)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.doc_ids)} documents x {len(self.words)} words"
            )
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate words in table")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise ValueError("duplicate document ids in table")

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_words(self) -> int:
        return len(self.words)

    def doc_index(self, doc_id: DocumentId) -> int:
        return self.doc_ids.index(doc_id)

    def validate(self, tol: float = 1e-9) -> None:
        """Check the frequency invariants: range and row sums."""
        if self.values.size and (
            self.values.min() < 0.0 or self.values.max() > 100.0
        ):
            raise ValueError("frequency values outside [0, 100]")
        sums = self.values.sum(axis=1)
        if self.values.size and sums.max() > 100.0 + tol:
            raise ValueError("document row sums exceed 100%")


def build_frequency_table(
    corpus: Iterable[Document], mfw_count: int
) -> FrequencyTable:
    """Rank words by total raw count over the corpus and keep the top n.

    Ties in total count break lexicographically. Document rows are sorted
    by id, so the table is invariant to corpus input order.
    """
    if mfw_count < 1:
        raise ValueError("mfw_count must be >= 1")
    docs = sorted(corpus, key=lambda d: d.id.raw)
    if not docs:
        raise EmptyTableError("cannot build a table from an empty corpus")
    for doc in docs:
        if doc.token_count == 0:
            raise DegenerateDocumentError(doc.id)

    counts = [Counter(doc.tokens) for doc in docs]
    totals: Counter[str] = Counter()
    for c in counts:
        totals.update(c)
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    words = tuple(w for w, _ in ranked[:mfw_count])

    values = np.zeros((len(docs), len(words)))
    for i, (doc, c) in enumerate(zip(docs, counts)):
        scale = 100.0 / doc.token_count
        for j, w in enumerate(words):
            values[i, j] = c[w] * scale
    return FrequencyTable(words=words, doc_ids=tuple(d.id for d in docs), values=values)


def select_mfw(table: FrequencyTable, n: int) -> FrequencyTable:
    """Keep the first min(n, |words|) columns; rank order preserved."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n >= table.n_words:
        return table
    return FrequencyTable(
        words=table.words[:n], doc_ids=table.doc_ids, values=table.values[:, :n]
    )


def _parse_cell(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise TableParseError(f"non-numeric cell {cell!r}", row=row, column=col)
    if not math.isfinite(value):
        raise TableParseError(f"non-finite cell {cell!r}", row=row, column=col)
    return value


def _unquote(label: str) -> str:
    if len(label) >= 2 and label[0] == label[-1] and label[0] in "'\"":
        return label[1:-1]
    return label


def _looks_like_doc_labels(labels: Sequence[str]) -> bool:
    return all(_DOC_LABEL_RE.match(lab) for lab in labels)


Orientation = Literal["auto", "docs-rows", "words-rows"]


def read_stylo_table(
    file: str | Path, orientation: Orientation = "auto"
) -> FrequencyTable:
    """Read a stylo-format frequency table, transposing if words are rows.

    Orientation auto-detection: if row labels match the Author_Title
    pattern and column labels do not, rows are documents; in the mirror
    case the table is transposed on load. Ambiguity raises an
    OrientationError asking for an explicit flag.
    """
    path = Path(file)
    lines = [ln for ln in path.read_text(encoding="utf-8-sig").splitlines() if ln.strip()]
    if len(lines) < 2:
        raise TableParseError(f"{path}: expected a header row and at least one data row")
    header = [_unquote(tok) for tok in lines[0].split()]
    rows: list[tuple[str, list[float]]] = []
    for r, line in enumerate(lines[1:], start=1):
        fields = line.split()
        label = _unquote(fields[0])
        data = fields[1:]
        rows.append((label, [_parse_cell(cell, r, c + 1) for c, cell in enumerate(data)]))

    ncols = len(rows[0][1])
    for r, (label, data) in enumerate(rows, start=1):
        if len(data) != ncols:
            raise TableParseError(
                f"ragged row with {len(data)} cells, expected {ncols}", row=r
            )
    # R's write.table emits either ncols labels or a leading corner label.
    if len(header) == ncols + 1:
        header = header[1:]
    if len(header) != ncols:
        raise TableParseError(
            f"header has {len(header)} labels for {ncols} data columns"
        )

    row_labels = [label for label, _ in rows]
    matrix = np.array([data for _, data in rows])

    if orientation == "auto":
        rows_are_docs = _looks_like_doc_labels(row_labels)
        cols_are_docs = _looks_like_doc_labels(header)
        if rows_are_docs == cols_are_docs:
            raise OrientationError(
                f"{path}: cannot tell documents from words by label shape"
            )
        orientation = "docs-rows" if rows_are_docs else "words-rows"

    if orientation == "words-rows":
        row_labels, header = header, row_labels
        matrix = matrix.T

    doc_ids = tuple(parse_document_id(lab) for lab in row_labels)
    table = FrequencyTable(words=tuple(header), doc_ids=doc_ids, values=matrix)
    # Printed values carry rounding error, so row sums get per-cell slack.
    table.validate(tol=1e-9 + 5e-9 * table.n_words)
    return table


def write_stylo_table(
    table: FrequencyTable,
    file: str | Path,
    orientation: Literal["docs-rows", "words-rows"] = "docs-rows",
) -> None:
    """Write a stylo-format table; re-reading reproduces it to printed precision."""
    if table.n_docs == 0 or table.n_words == 0:
        raise EmptyTableError("refusing to write an empty table")
    if orientation == "docs-rows":
        header = table.words
        row_labels: Sequence[str] = [d.raw for d in table.doc_ids]
        matrix = table.values
    else:
        header = tuple(d.raw for d in table.doc_ids)
        row_labels = table.words
        matrix = table.values.T
    with open(file, "w", encoding="utf-8") as fh:
        fh.write(" ".join(header) + "\n")
        for label, row in zip(row_labels, matrix):
            fh.write(label + " " + " ".join(f"{v:.10g}" for v in row) + "\n")
