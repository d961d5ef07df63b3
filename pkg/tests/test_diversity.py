import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cpcmap.diversity import DiversityResult, d2_3, diversity, proportions, rao_delta
from cpcmap.similarity import DistanceMatrix
from oracles import rao_double_loop


def random_distance(n, rng):
    x = rng.uniform(0, 1, size=(n, n))
    d = np.triu(x, 1)
    return d + d.T


def test_single_class_portfolio_has_zero_delta():
    d = random_distance(4, np.random.default_rng(0))
    assert rao_delta([0, 3, 0, 0], d) == 0.0
    assert d2_3(0.0) == 1.0


def test_two_class_hand_value():
    d = np.array([[0, 0.4], [0.4, 0]])
    # 2 * 0.5 * 0.5 * 0.4
    assert rao_delta([0.5, 0.5], d) == pytest.approx(0.2, abs=1e-15)
    assert rao_delta([7, 7], d) == pytest.approx(0.2, abs=1e-15)


def test_accepts_distance_matrix():
    d = DistanceMatrix(np.array([[0, 0.4], [0.4, 0]]), ("A01B", "B01C"))
    assert rao_delta([1, 1], d) == pytest.approx(0.2, abs=1e-15)


def test_nonzero_diagonal_is_ignored():
    d = np.array([[0.9, 0.4], [0.4, 0.7]])
    assert rao_delta([1, 1], d) == pytest.approx(0.2, abs=1e-15)


def test_empty_or_negative_portfolio_raises():
    d = np.zeros((2, 2))
    with pytest.raises(ValueError, match="empty"):
        rao_delta([0, 0], d)
    with pytest.raises(ValueError):
        proportions([1, -1])


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        rao_delta([1, 1, 1], np.zeros((2, 2)))


portfolios = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        arrays(np.float64, n, elements=st.sampled_from([0.0, 0.0, 0.25, 0.5, 1.0, 3.0, 12.5])),
        st.integers(0, 2**32 - 1),
    )
).filter(lambda t: t[0].sum() > 0)


@given(portfolios)
def test_matches_double_loop(case):
    w, seed = case
    d = random_distance(w.size, np.random.default_rng(seed))
    assert rao_delta(w, d) == pytest.approx(rao_double_loop(w.tolist(), d.tolist()), abs=1e-12)


@given(portfolios, st.sampled_from([0.001, 2.0, 1000.0]))
def test_scale_invariant_in_counts(case, c):
    w, seed = case
    d = random_distance(w.size, np.random.default_rng(seed))
    assert rao_delta(c * w, d) == pytest.approx(rao_delta(w, d), abs=1e-12)


@given(portfolios)
def test_bounded_by_max_distance(case):
    w, seed = case
    d = random_distance(w.size, np.random.default_rng(seed))
    delta = rao_delta(w, d)
    assert 0.0 <= delta <= d.max() * (1 - (proportions(w) ** 2).sum()) + 1e-12


@given(portfolios)
def test_monotone_in_distances(case):
    w, seed = case
    d = random_distance(w.size, np.random.default_rng(seed))
    assert rao_delta(w, np.minimum(1.0, d * 1.5)) >= rao_delta(w, d) - 1e-12


@given(st.floats(0.0, 0.999), st.floats(0.0, 0.999))
def test_d2_3_strictly_increasing(a, b):
    # below ~1e-16 apart, 1/(1-x) cannot resolve the difference in double precision
    if b - a > 1e-12:
        assert d2_3(a) < d2_3(b)
    assert d2_3(a) >= 1.0


@pytest.mark.parametrize("bad", [1.0, 1.5, -0.01, float("nan")])
def test_d2_3_domain(bad):
    with pytest.raises(ValueError):
        d2_3(bad)


def test_worked_values():
    assert round(d2_3(0.53), 2) == 2.13
    assert d2_3(0.5) == 2.0
    assert d2_3(0.75) == 4.0


def test_delta_ranking_equals_d2_3_ranking():
    rng = np.random.default_rng(3)
    d = random_distance(15, rng)
    results = [diversity(f"s{i}", rng.gamma(0.5, size=15), d, 10) for i in range(30)]
    by_delta = sorted(results, key=lambda r: r.delta)
    by_d23 = sorted(results, key=lambda r: r.d2_3)
    assert [r.sample_name for r in by_delta] == [r.sample_name for r in by_d23]


def test_result_record():
    r = DiversityResult.from_delta("Boston", 0.5, 1234)
    assert (r.sample_name, r.delta, r.d2_3, r.n_patents) == ("Boston", 0.5, 2.0, 1234)


def test_spreading_mass_increases_delta():
    d = np.array([[0, 0.3, 0.9], [0.3, 0, 0.5], [0.9, 0.5, 0]])
    assert rao_delta([1, 0, 0], d) == 0.0
    assert rao_delta([0.5, 0.5, 0], d) > rao_delta([1, 0, 0], d)
    assert rao_delta([0.5, 0.25, 0.25], d) > rao_delta([0.5, 0.5, 0], d)
