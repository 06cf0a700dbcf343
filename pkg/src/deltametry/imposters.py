"""General Imposters authorship verification.

A candidate authorship is scored by repeated feature subsampling: each
round draws a random subset of word columns, refits the z-score model on
that subset over all documents, and checks whether the document nearest to
the disputed text (by Burrows' Delta) belongs to the candidate author. The
score is the fraction of rounds the candidate wins. The candidate's own
documents never act as imposters, and the disputed text is excluded from
every pool. Per-round RNG substreams are derived from (seed, round), so
results are identical whether rounds run sequentially or in parallel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import DocumentId
from .errors import DegenerateSetupError, UnknownCandidateError, UnknownDocumentError
from .frequencies import FrequencyTable

__all__ = ["ImpostersConfig", "ImpostersReport", "imposters_score", "imposters_all"]


@dataclass(frozen=True)
class ImpostersConfig:
    seed: int
    iterations: int = 100
    feature_fraction: float = 0.5
    imposters_per_iteration: int | None = None  # None = use all imposters

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not (0.0 < self.feature_fraction <= 1.0):
            raise ValueError("feature_fraction must be in (0, 1]")
        if self.imposters_per_iteration is not None and self.imposters_per_iteration < 1:
            raise ValueError("imposters_per_iteration must be >= 1")


def _round_distances(
    values: np.ndarray, cols: np.ndarray, test_row: int, pool_rows: np.ndarray
) -> np.ndarray:
    """Delta from the test row to each pool row over the sampled columns.

    The z-model is refit on the sampled columns over ALL documents;
    degenerate (sd = 0) columns are dropped for the round.
    """
    sub = values[:, cols]
    mean = sub.mean(axis=0)
    sd = sub.std(axis=0, ddof=1)
    keep = sd > 0.0
    if not keep.any():
        raise DegenerateSetupError("all sampled word columns are constant")
    z = (sub[:, keep] - mean[keep]) / sd[keep]
    return np.abs(z[pool_rows] - z[test_row]).mean(axis=1)


def imposters_score(
    test: DocumentId,
    candidate: str,
    table: FrequencyTable,
    config: ImpostersConfig,
) -> float:
    if test not in table.doc_ids:
        raise UnknownDocumentError(test)
    test_row = table.doc_index(test)
    candidate_rows = np.array(
        [i for i, d in enumerate(table.doc_ids) if d.author == candidate and i != test_row],
        dtype=np.intp,
    )
    if candidate_rows.size == 0:
        raise UnknownCandidateError(candidate)
    imposter_rows = np.array(
        [
            i
            for i, d in enumerate(table.doc_ids)
            if d.author != candidate and i != test_row
        ],
        dtype=np.intp,
    )
    if imposter_rows.size == 0:
        raise DegenerateSetupError(
            f"no imposter documents available against candidate {candidate!r}"
        )

    n_features = math.ceil(config.feature_fraction * table.n_words)
    votes = 0
    for it in range(config.iterations):
        rng = np.random.default_rng([config.seed, it])
        cols = rng.choice(table.n_words, size=n_features, replace=False)
        if config.imposters_per_iteration is not None:
            k = min(config.imposters_per_iteration, imposter_rows.size)
            round_imposters = rng.choice(imposter_rows, size=k, replace=False)
        else:
            round_imposters = imposter_rows
        pool = np.concatenate([candidate_rows, round_imposters])
        d = _round_distances(table.values, cols, test_row, pool)
        # Candidate wins ties: adding an exact copy of the test document to
        # the candidate class can never lower the score.
        if d[: candidate_rows.size].min() <= d[candidate_rows.size :].min():
            votes += 1
    return votes / config.iterations


@dataclass(frozen=True)
class ImpostersReport:
    test_doc: DocumentId
    scores: dict[str, float] = field(hash=False)
    config: ImpostersConfig

    def format_text(self) -> str:
        classes = sorted(self.scores)
        lines = [
            "No candidate set specified; testing the following classes (one at a time):",
            "  " + "   ".join(classes),
            "",
            "Testing a given candidate against imposters...",
            "",
        ]
        lines += [f"{c} \t {self.scores[c]:.2f}" for c in classes]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "test_doc": self.test_doc.raw,
            "scores": {c: self.scores[c] for c in sorted(self.scores)},
            "config": {
                "seed": self.config.seed,
                "iterations": self.config.iterations,
                "feature_fraction": self.config.feature_fraction,
                "imposters_per_iteration": self.config.imposters_per_iteration,
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def imposters_all(
    test: DocumentId, table: FrequencyTable, config: ImpostersConfig
) -> ImpostersReport:
    """Score every author class with at least one non-test document."""
    if test not in table.doc_ids:
        raise UnknownDocumentError(test)
    classes = sorted({d.author for d in table.doc_ids if d != test})
    if len(classes) < 2:
        raise DegenerateSetupError(
            "imposters needs at least two author classes besides the test document"
        )
    scores = {c: imposters_score(test, c, table, config) for c in classes}
    return ImpostersReport(test_doc=test, scores=scores, config=config)
