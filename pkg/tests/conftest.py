import math

import numpy as np
import pytest

from deltametry import DocumentId, FrequencyTable


def make_table(values, words=None, doc_ids=None) -> FrequencyTable:
    values = np.asarray(values, dtype=float)
    ndocs, nwords = values.shape
    if words is None:
        words = tuple(f"w{j}" for j in range(nwords))
    if doc_ids is None:
        doc_ids = tuple(DocumentId(f"Auth{i}", f"Title{i}") for i in range(ndocs))
    return FrequencyTable(words=tuple(words), doc_ids=tuple(doc_ids), values=values)


def random_table(rng: np.random.Generator, ndocs: int, nwords: int) -> FrequencyTable:
    # Small positive values keep the [0, 100] and row-sum invariants safe.
    values = rng.uniform(0.01, 1.0, size=(ndocs, nwords))
    return make_table(values)


def brute_delta_matrix(table: FrequencyTable):
    """Independent Delta oracle: explicit mean/sd/z/L1 loops, no numpy math."""
    ndocs, nwords = table.values.shape
    rows = [[float(x) for x in row] for row in table.values]
    means, sds = [], []
    for j in range(nwords):
        col = [rows[i][j] for i in range(ndocs)]
        mean = sum(col) / ndocs
        var = sum((x - mean) ** 2 for x in col) / (ndocs - 1)
        means.append(mean)
        sds.append(math.sqrt(var))
    keep = [j for j in range(nwords) if sds[j] > 0]
    z = [[(rows[i][j] - means[j]) / sds[j] for j in keep] for i in range(ndocs)]
    k = len(keep)
    out = [[0.0] * ndocs for _ in range(ndocs)]
    for a in range(ndocs):
        for b in range(ndocs):
            if a != b:
                out[a][b] = sum(abs(z[a][j] - z[b][j]) for j in range(k)) / k
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240823)
