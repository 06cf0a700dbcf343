"""Burrows' Delta: z-score standardization and intertextual distances.

Delta between two documents is the mean absolute difference of their
per-word z-scores over the top most-frequent words. The z-score model
(per-word mean and sample standard deviation, n-1 denominator) is fitted
over all documents of the table, including any disputed test document,
matching the pipeline whose published distance tables this package
reproduces. A flag allows excluding one document for leave-one-out runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DocumentId
from .errors import (
    DimensionError,
    InsufficientDataError,
    InvalidMatrixError,
    ModelMismatchError,
    UnknownDocumentError,
)
from .frequencies import FrequencyTable, select_mfw

__all__ = [
    "ZScoreModel",
    "ZMatrix",
    "DistanceMatrix",
    "fit_zscores",
    "zscore_transform",
    "burrows_delta",
    "distance_matrix",
    "nearest_neighbor",
]


@dataclass(frozen=True)
class ZScoreModel:
    words: tuple[str, ...]
    mean: np.ndarray
    sd: np.ndarray

    @property
    def degenerate_words(self) -> tuple[str, ...]:
        """Words with zero standard deviation; excluded from z-transforms."""
        return tuple(w for w, s in zip(self.words, self.sd) if s == 0.0)


@dataclass(frozen=True)
class ZMatrix:
    """Standardized frequencies; degenerate (sd=0) words are dropped."""

    words: tuple[str, ...]
    doc_ids: tuple[DocumentId, ...]
    z: np.ndarray
    dropped_words: tuple[str, ...]


def fit_zscores(table: FrequencyTable, exclude: DocumentId | None = None) -> ZScoreModel:
    """Fit per-word mean and sample standard deviation over documents."""
    values = table.values
    if exclude is not None:
        mask = np.array([d != exclude for d in table.doc_ids])
        values = values[mask]
    if values.shape[0] < 2:
        raise InsufficientDataError(
            f"z-score fit needs >= 2 documents, got {values.shape[0]}"
        )
    return ZScoreModel(
        words=table.words,
        mean=values.mean(axis=0),
        sd=values.std(axis=0, ddof=1),
    )


def zscore_transform(table: FrequencyTable, model: ZScoreModel) -> ZMatrix:
    if model.words != table.words:
        raise ModelMismatchError("model word list does not match table word list")
    keep = model.sd > 0.0
    z = (table.values[:, keep] - model.mean[keep]) / model.sd[keep]
    return ZMatrix(
        words=tuple(w for w, k in zip(table.words, keep) if k),
        doc_ids=table.doc_ids,
        z=z,
        dropped_words=tuple(w for w, k in zip(table.words, keep) if not k),
    )


def burrows_delta(z_a: np.ndarray, z_b: np.ndarray) -> float:
    """Mean absolute z-score difference between two documents."""
    z_a = np.asarray(z_a, dtype=np.float64)
    z_b = np.asarray(z_b, dtype=np.float64)
    if z_a.shape != z_b.shape or z_a.ndim != 1 or z_a.size == 0:
        raise DimensionError(
            f"z-vectors must be equal-length and non-empty, got {z_a.shape} vs {z_b.shape}"
        )
    return float(np.abs(z_a - z_b).mean())


@dataclass(frozen=True)
class DistanceMatrix:
    doc_ids: tuple[DocumentId, ...]
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d", np.ascontiguousarray(self.d, dtype=np.float64))
        n = len(self.doc_ids)
        if self.d.shape != (n, n):
            raise InvalidMatrixError(f"matrix shape {self.d.shape} for {n} documents")

    @property
    def n(self) -> int:
        return len(self.doc_ids)

    def index(self, doc_id: DocumentId) -> int:
        try:
            return self.doc_ids.index(doc_id)
        except ValueError:
            raise UnknownDocumentError(doc_id)

    def get(self, a: DocumentId, b: DocumentId) -> float:
        return float(self.d[self.index(a), self.index(b)])

    def validate(self, tol: float = 1e-9) -> None:
        if np.abs(self.d - self.d.T).max(initial=0.0) > tol:
            raise InvalidMatrixError("matrix is not symmetric")
        if np.abs(np.diag(self.d)).max(initial=0.0) > tol:
            raise InvalidMatrixError("matrix diagonal is not zero")
        if self.d.min(initial=0.0) < -tol:
            raise InvalidMatrixError("matrix has negative distances")


def distance_matrix(
    table: FrequencyTable, mfw: int | None = None
) -> DistanceMatrix:
    """Pairwise Burrows' Delta over the top-mfw non-degenerate words."""
    if table.n_docs < 2:
        raise InsufficientDataError("distance matrix needs >= 2 documents")
    if mfw is not None:
        table = select_mfw(table, mfw)
    zm = zscore_transform(table, fit_zscores(table))
    if zm.z.shape[1] == 0:
        raise InsufficientDataError("all word columns are degenerate (sd = 0)")
    diffs = np.abs(zm.z[:, None, :] - zm.z[None, :, :]).mean(axis=2)
    np.fill_diagonal(diffs, 0.0)
    return DistanceMatrix(doc_ids=table.doc_ids, d=diffs)


def nearest_neighbor(
    m: DistanceMatrix, target: DocumentId
) -> tuple[DocumentId, float]:
    """Closest other document; ties break lexicographically by id."""
    if m.n < 2:
        raise InsufficientDataError("nearest neighbor needs >= 2 documents")
    i = m.index(target)
    best = min(
        (
            (float(m.d[i, j]), doc.raw, doc)
            for j, doc in enumerate(m.doc_ids)
            if j != i
        ),
    )
    return best[2], best[0]
