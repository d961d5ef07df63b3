import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rec
from cpcmap.comatrix import binarize, build_two_mode, read_sparse_dump, row_profile, write_sparse_dump
from cpcmap.ingest import ClassScheme, SchemeError
from cpcmap.similarity import similarity_matrix

SCHEME = ClassScheme.from_codes(["A01B", "B01C", "C07D", "H01L"])


def test_repeated_citation_counts_twice():
    m = build_two_mode([rec("1", ["A01B"], ["c1", "c1"])], SCHEME, "whole")
    assert m.shape == (4, 1)
    assert m.dense()[0, 0] == 2


def test_fractional_split_over_classes():
    m = build_two_mode([rec("1", ["A01B", "B01C"], ["c1"])], SCHEME, "fractional")
    assert m.dense()[:, 0].tolist() == [0.5, 0.5, 0.0, 0.0]


def test_whole_counting_gives_each_class_full_weight():
    m = build_two_mode([rec("1", ["A01B", "B01C"], ["c1"])], SCHEME, "whole")
    assert m.dense()[:, 0].tolist() == [1.0, 1.0, 0.0, 0.0]


def test_empty_corpus():
    m = build_two_mode([], SCHEME)
    assert m.shape == (4, 0) and m.total() == 0


def test_columns_in_first_encounter_order():
    m = build_two_mode([rec("1", ["A01B"], ["z", "a"]), rec("2", ["C07D"], ["a", "q"])], SCHEME)
    assert m.col_ids == ("z", "a", "q")
    assert m.col_index == {"z": 0, "a": 1, "q": 2}


def test_binarize():
    m = build_two_mode([rec("1", ["A01B"], ["c1", "c1", "c2"]), rec("2", ["A01B"], ["c2", "c2"])], SCHEME, "whole")
    assert sorted(m.data.data.tolist()) == [2.0, 3.0]
    b = binarize(m)
    assert b.data.data.tolist() == [1.0, 1.0]
    assert (b.data != 0).toarray().tolist() == (m.data != 0).toarray().tolist()
    assert (binarize(b).data != b.data).nnz == 0


def test_binarize_fixture_with_counts_1_2_3():
    corpus = [rec("1", ["A01B"], ["c1"]), rec("2", ["B01C"], ["c2", "c2"]), rec("3", ["C07D"], ["c3"] * 3)]
    m = build_two_mode(corpus, SCHEME, "whole")
    assert sorted(m.data.data.tolist()) == [1.0, 2.0, 3.0]
    b = binarize(m)
    assert b.data.data.tolist() == [1.0, 1.0, 1.0]
    np.testing.assert_array_equal(b.data.indices, m.data.indices)
    np.testing.assert_array_equal(b.data.indptr, m.data.indptr)


def test_row_profile():
    m = build_two_mode([rec("1", ["A01B", "C07D"], ["x", "y", "x"])], SCHEME, "whole")
    assert row_profile(m, "A01B").vector == {0: 2.0, 1: 1.0}
    assert row_profile(m, "H01L").vector == {}
    with pytest.raises(SchemeError):
        row_profile(m, "Z99Z")
    assert sum(sum(row_profile(m, c).vector.values()) for c in SCHEME.codes) == m.total()


citing = st.lists(
    st.tuples(
        st.lists(st.sampled_from(SCHEME.codes), min_size=1, max_size=4, unique=True),
        st.lists(st.sampled_from(["c1", "c2", "c3", "c4", "c5"]), max_size=6),
    ),
    max_size=10,
)


def _corpus(layout):
    return [rec(str(i), classes, cited) for i, (classes, cited) in enumerate(layout)]


@given(citing)
def test_fractional_conservation(layout):
    corpus = _corpus(layout)
    m = build_two_mode(corpus, SCHEME, "fractional")
    assert m.total() == pytest.approx(sum(len(r.cited) for r in corpus), abs=1e-9)
    # one patent at a time: its mass equals its cited-list length
    for r in corpus:
        assert build_two_mode([r], SCHEME, "fractional").total() == pytest.approx(len(r.cited), abs=1e-12)


@given(citing)
def test_whole_total_counts_incidences(layout):
    corpus = _corpus(layout)
    m = build_two_mode(corpus, SCHEME, "whole")
    assert m.total() == sum(len(r.cited) * len(r.classes) for r in corpus)


@given(citing, st.randoms(use_true_random=False))
def test_order_independence(layout, rnd):
    corpus = _corpus(layout)
    shuffled = list(corpus)
    rnd.shuffle(shuffled)
    m1 = build_two_mode(corpus, SCHEME, "whole")
    m2 = build_two_mode(shuffled, SCHEME, "whole")
    # same matrix up to column relabeling
    perm = [m2.col_index[cid] for cid in m1.col_ids]
    np.testing.assert_array_equal(m1.dense(), m2.dense()[:, perm])
    for kind in ("jaccard", "cosine", "tanimoto"):
        np.testing.assert_allclose(similarity_matrix(m1, kind).values, similarity_matrix(m2, kind).values,
                                   atol=1e-12, rtol=0)


def test_sparse_dump_round_trip(tmp_path):
    corpus = [rec("1", ["A01B", "C07D"], ["x", "y", "x"]), rec("2", ["H01L"], ["y"])]
    m = build_two_mode(corpus, SCHEME, "fractional")
    path = tmp_path / "m.txt"
    write_sparse_dump(m, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "4 2 5"
    assert lines[1:] == ["0 0 1.000000", "0 1 0.500000", "2 0 1.000000", "2 1 0.500000", "3 1 1.000000"]
    np.testing.assert_allclose(read_sparse_dump(path).toarray(), m.dense(), atol=1e-6)
