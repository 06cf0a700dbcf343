import numpy as np
import pytest

from deltametry import (
    Document,
    DocumentId,
    build_frequency_table,
    read_stylo_table,
    select_mfw,
    write_stylo_table,
)
from deltametry.errors import (
    DegenerateDocumentError,
    EmptyTableError,
    OrientationError,
    TableParseError,
)

from conftest import make_table, random_table


def doc(stem, text):
    return Document(id=DocumentId(*stem.split("_", 1)), tokens=tuple(text.split()))


class TestBuildFrequencyTable:
    def test_hand_counted(self):
        docs = [doc("D_1", "a a b"), doc("D_2", "a c")]
        table = build_frequency_table(docs, mfw_count=2)
        # counts: a=3, b=1, c=1; tie b/c breaks lexicographically
        assert table.words == ("a", "b")
        np.testing.assert_allclose(table.values[0], [100 * 2 / 3, 100 / 3])
        np.testing.assert_allclose(table.values[1], [50.0, 0.0])

    def test_single_mfw(self):
        docs = [doc("D_1", "a a b"), doc("D_2", "a c")]
        table = build_frequency_table(docs, mfw_count=1)
        assert table.words == ("a",)
        np.testing.assert_allclose(table.values[:, 0], [100 * 2 / 3, 50.0])

    def test_zero_token_document(self):
        with pytest.raises(DegenerateDocumentError):
            build_frequency_table([doc("D_1", "a"), Document(DocumentId("D", "2"), ())], 1)

    def test_permutation_invariant(self):
        docs = [doc("B_x", "a b b c"), doc("A_y", "b c c"), doc("C_z", "a a")]
        t1 = build_frequency_table(docs, 10)
        t2 = build_frequency_table(list(reversed(docs)), 10)
        assert t1.words == t2.words
        assert t1.doc_ids == t2.doc_ids
        np.testing.assert_array_equal(t1.values, t2.values)

    def test_full_vocabulary_rows_sum_to_100(self):
        docs = [doc("A_x", "a b c a"), doc("B_y", "d d e")]
        table = build_frequency_table(docs, mfw_count=10**9)
        np.testing.assert_allclose(table.values.sum(axis=1), [100.0, 100.0], atol=1e-9)

    def test_deterministic_ranking(self):
        docs = [doc("A_x", "p q r s"), doc("B_y", "s r q p")]
        tables = [build_frequency_table(docs, 4) for _ in range(3)]
        assert all(t.words == tables[0].words for t in tables)


class TestSelectMfw:
    def test_truncates(self, rng):
        table = random_table(rng, 4, 30)
        sub = select_mfw(table, 10)
        assert sub.words == table.words[:10]
        assert sub.doc_ids == table.doc_ids
        np.testing.assert_array_equal(sub.values, table.values[:, :10])

    def test_clamps(self, rng):
        table = random_table(rng, 3, 5)
        assert select_mfw(table, 50) is table

    def test_identity(self, rng):
        table = random_table(rng, 3, 5)
        assert select_mfw(table, 5).words == table.words


class TestStyloFormat:
    def test_round_trip_docs_rows(self, tmp_path, rng):
        table = random_table(rng, 3, 7)
        path = tmp_path / "t.txt"
        write_stylo_table(table, path, orientation="docs-rows")
        back = read_stylo_table(path)
        assert back.words == table.words
        assert back.doc_ids == table.doc_ids
        np.testing.assert_allclose(back.values, table.values, atol=1e-6)

    def test_round_trip_words_rows(self, tmp_path, rng):
        table = random_table(rng, 3, 7)
        path = tmp_path / "t.txt"
        write_stylo_table(table, path, orientation="words-rows")
        back = read_stylo_table(path)
        assert back.words == table.words
        assert back.doc_ids == table.doc_ids
        np.testing.assert_allclose(back.values, table.values, atol=1e-6)

    def test_words_as_rows_transposed_on_load(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text(
            "French_TheSecretPlace Rowling_ChamberOfSecrets\n"
            "the 5.1 4.9\n"
            "of 3.2 3.3\n",
            encoding="utf-8",
        )
        table = read_stylo_table(path)
        assert [d.raw for d in table.doc_ids] == [
            "French_TheSecretPlace",
            "Rowling_ChamberOfSecrets",
        ]
        assert table.words == ("the", "of")
        np.testing.assert_allclose(table.values, [[5.1, 3.2], [4.9, 3.3]])

    def test_docs_as_rows_loaded_as_is(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text(
            "the of\nFrench_TheSecretPlace 5.1 3.2\nRowling_ChamberOfSecrets 4.9 3.3\n",
            encoding="utf-8",
        )
        table = read_stylo_table(path)
        assert table.words == ("the", "of")
        np.testing.assert_allclose(table.values, [[5.1, 3.2], [4.9, 3.3]])

    def test_nan_cell_rejected_with_position(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("the of\nA_x 5.1 NaN\nB_y 4.9 3.3\n", encoding="utf-8")
        with pytest.raises(TableParseError) as excinfo:
            read_stylo_table(path)
        assert excinfo.value.row == 1
        assert excinfo.value.column == 2

    def test_non_numeric_cell_rejected(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("the of\nA_x oops 1.0\n", encoding="utf-8")
        with pytest.raises(TableParseError):
            read_stylo_table(path)

    def test_ambiguous_orientation(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("A_x B_y\nC_z 1.0 2.0\nD_w 2.0 1.0\n", encoding="utf-8")
        with pytest.raises(OrientationError):
            read_stylo_table(path)

    def test_explicit_orientation_overrides(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("A_x B_y\nC_z 1.0 2.0\nD_w 2.0 1.0\n", encoding="utf-8")
        table = read_stylo_table(path, orientation="docs-rows")
        assert [d.raw for d in table.doc_ids] == ["C_z", "D_w"]

    def test_quoted_r_style_header(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text(
        '"the" "of"\n"A_x" 5.1 3.2\n"B_y" 4.9 3.3\n', encoding="utf-8"
        )
        table = read_stylo_table(path)
        assert table.words == ("the", "of")

    def test_empty_table_refused(self, tmp_path):
        table = make_table(np.zeros((0, 0)).reshape(0, 0), words=(), doc_ids=())
        with pytest.raises(EmptyTableError):
            write_stylo_table(table, tmp_path / "t.txt")
