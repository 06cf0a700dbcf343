import numpy as np
import pytest

from deltametry import (
    DistanceMatrix,
    DocumentId,
    dendrogram_to_newick,
    distance_matrix,
    hierarchical_cluster,
    parse_newick,
)
from deltametry.cluster import leaf_order, render_dendrogram_svg
from deltametry.errors import InsufficientDataError, InvalidMatrixError

from conftest import random_table
import published_tables


def matrix_from(values, labels=None):
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if labels is None:
        labels = [f"A{i}_T{i}" for i in range(n)]
    ids = tuple(DocumentId(*lab.split("_", 1)) for lab in labels)
    return DistanceMatrix(doc_ids=ids, d=values)


def random_metric_matrix(rng, n):
    """Random points in the plane give a genuine metric without ties."""
    pts = rng.uniform(0, 10, size=(n, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return matrix_from(d)


def naive_lance_williams(d, sizes_linkage):
    """Independent oracle: quadratic scan over a plain list of clusters."""
    linkage = sizes_linkage
    dist = {
        (i, j): d[i, j]
        for i in range(d.shape[0])
        for j in range(i + 1, d.shape[0])
    }
    heights = []
    next_id = d.shape[0]
    alive = list(range(d.shape[0]))
    sizes = {i: 1 for i in alive}
    while len(alive) > 1:
        (i, j), h = min(dist.items(), key=lambda kv: kv[1])
        heights.append(h)
        ni, nj = sizes[i], sizes[j]
        new = next_id
        next_id += 1
        sizes[new] = ni + nj
        alive = [c for c in alive if c not in (i, j)]
        for k in alive:
            dik = dist.pop((min(i, k), max(i, k)))
            djk = dist.pop((min(j, k), max(j, k)))
            nk = sizes[k]
            if linkage == "average":
                val = (ni * dik + nj * djk) / (ni + nj)
            elif linkage == "single":
                val = min(dik, djk)
            elif linkage == "complete":
                val = max(dik, djk)
            elif linkage == "ward":
                s = ni + nj + nk
                val = ((ni + nk) * dik + (nj + nk) * djk - nk * h) / s
            dist[(k, new)] = val
        del dist[(i, j)]
        alive.append(new)
    return heights


class TestHierarchicalCluster:
    def test_first_merge_is_minimal_pair(self):
        m = matrix_from([[0, 1, 10], [1, 0, 10], [10, 10, 0]], ["A_a", "B_b", "C_c"])
        dend = hierarchical_cluster(m)
        a, b, h = dend.merges[0]
        assert {a, b} == {0, 1}
        assert h == 1.0

    @pytest.mark.parametrize("linkage", ["ward", "average", "complete", "single"])
    def test_heights_match_naive_oracle(self, rng, linkage):
        m = random_metric_matrix(rng, 6)
        dend = hierarchical_cluster(m, linkage)
        expected = naive_lance_williams(m.d.copy(), linkage)
        got = [h for _, _, h in dend.merges]
        np.testing.assert_allclose(got, expected, atol=1e-9)

    @pytest.mark.parametrize("linkage", ["ward", "average", "complete", "single"])
    def test_first_merge_is_global_minimum(self, rng, linkage):
        m = random_metric_matrix(rng, 7)
        dend = hierarchical_cluster(m, linkage)
        off = m.d + np.eye(m.n) * 1e9
        assert dend.merges[0][2] == pytest.approx(off.min())

    def test_leaf_set_preserved(self, rng):
        m = random_metric_matrix(rng, 8)
        dend = hierarchical_cluster(m)
        dend.validate()
        assert sorted(leaf_order(dend)) == list(range(8))
        assert set(dend.leaves) == set(m.doc_ids)

    def test_heights_nondecreasing(self, rng):
        for linkage in ("ward", "average", "complete", "single"):
            m = random_metric_matrix(rng, 9)
            dend = hierarchical_cluster(m, linkage)
            heights = [h for _, _, h in dend.merges]
            assert all(b >= a - 1e-9 for a, b in zip(heights, heights[1:]))

    def test_input_order_invariance(self, rng):
        m = random_metric_matrix(rng, 7)
        perm = rng.permutation(7)
        m2 = DistanceMatrix(
            doc_ids=tuple(m.doc_ids[i] for i in perm), d=m.d[np.ix_(perm, perm)]
        )
        d1 = hierarchical_cluster(m)
        d2 = hierarchical_cluster(m2)
        c1 = sorted((sorted(s), round(h, 9)) for s, h in d1.clade_leafsets())
        c2 = sorted((sorted(s), round(h, 9)) for s, h in d2.clade_leafsets())
        assert c1 == c2

    def test_deterministic_tie_break(self):
        # all off-diagonal distances equal: merges proceed in id order
        m = matrix_from(np.ones((3, 3)) - np.eye(3), ["B_b", "A_a", "C_c"])
        dend = hierarchical_cluster(m, "single")
        first = dend.merges[0]
        merged = {m.doc_ids[first[0]].raw, m.doc_ids[first[1]].raw}
        assert merged == {"A_a", "B_b"}

    def test_asymmetric_matrix_rejected(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(InvalidMatrixError):
            hierarchical_cluster(matrix_from(d, ["A_a", "B_b"]))

    def test_single_document_rejected(self):
        with pytest.raises(InsufficientDataError):
            hierarchical_cluster(matrix_from([[0.0]], ["A_a"]))

    def test_detective_rowling_galbraith_clade(self):
        # structural mirror of the published detective dendrogram: the
        # Galbraith leaf joins Rowling titles before any other author
        m = published_tables.detective_matrix()
        dend = hierarchical_cluster(m)
        galbraith = "Galbraith_TheCuckoosCalling"
        for leafset, _ in sorted(dend.clade_leafsets(), key=lambda sh: len(sh[0])):
            if galbraith in leafset and len(leafset) > 1:
                others = {lab.split("_")[0] for lab in leafset} - {"Galbraith"}
                assert others == {"Rowling"}
                break


class TestNewick:
    def test_single_merge(self):
        m = matrix_from([[0, 1], [1, 0]], ["A_x", "B_y"])
        dend = hierarchical_cluster(m)
        assert dendrogram_to_newick(dend) == "(A_x:0.5,B_y:0.5);"

    def test_three_leaf_nested(self):
        m = matrix_from([[0, 1, 4], [1, 0, 4], [4, 4, 0]], ["A_x", "B_y", "C_z"])
        dend = hierarchical_cluster(m, "single")
        assert dendrogram_to_newick(dend) == "((A_x:0.5,B_y:0.5):1.5,C_z:2);"

    def test_round_trip_topology_and_heights(self, rng):
        for linkage in ("ward", "average"):
            m = random_metric_matrix(rng, 8)
            dend = hierarchical_cluster(m, linkage)
            back = parse_newick(dendrogram_to_newick(dend))
            orig = {s: h for s, h in dend.clade_leafsets()}
            parsed = {s: h for s, h in back.clade_leafsets()}
            assert orig.keys() == parsed.keys()
            for s in orig:
                assert parsed[s] == pytest.approx(orig[s], abs=1e-9)


class TestDendrogramSvg:
    def test_two_leaves(self, tmp_path):
        m = matrix_from([[0, 1], [1, 0]], ["A_x", "B_y"])
        dend = hierarchical_cluster(m)
        out = tmp_path / "d.svg"
        render_dendrogram_svg(dend, out)
        svg = out.read_text()
        assert svg.startswith("<?xml")
        assert svg.count("<text") >= 2
        assert "A_x" in svg and "B_y" in svg

    def test_deterministic_bytes(self, tmp_path, rng):
        m = random_metric_matrix(rng, 6)
        dend = hierarchical_cluster(m)
        p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
        render_dendrogram_svg(dend, p1)
        render_dendrogram_svg(dend, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_author_coloring_shares_color(self, tmp_path):
        m = published_tables.detective_matrix()
        dend = hierarchical_cluster(m)
        out = tmp_path / "d.svg"
        render_dendrogram_svg(dend, out, author_coloring=True)
        svg = out.read_text()
        # one label line per detective-corpus document
        assert svg.count("Rowling_") == 7
        assert svg.count("<text") >= 14
