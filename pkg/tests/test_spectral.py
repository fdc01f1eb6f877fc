import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings

from hl2lab import (
    Graph,
    NotRegular,
    TooLarge,
    hl2_lift,
    hl2_tower,
    make_complete,
    make_cycle,
    make_erdos_renyi,
    make_petersen,
    make_random_regular,
)
from hl2lab.spectral import (
    block_lanczos,
    canonical_signs,
    distinct_eigenvalues,
    full_spectrum,
    magnitude_order,
    predict_lift_spectrum,
    predict_lift_spectrum_for,
    predict_tower_spectrum,
    top_k_eigenpairs,
)
from conftest import regular_zoo
from oracles import dense
from test_graph import graphs

K4_TOWER = hl2_tower(make_complete(4), 3)[0]


def _check_eigensystem(g, es, tol=1e-8):
    a = g.dense_adjacency()
    norm = max(1.0, np.linalg.norm(a, 2))
    for lam, v in zip(es.values, es.vectors.T):
        assert np.linalg.norm(a @ v - lam * v) <= tol * norm
    np.testing.assert_allclose(es.vectors.T @ es.vectors, np.eye(es.k), atol=1e-8)


def test_k4_spectrum(k4):
    es = full_spectrum(k4)
    np.testing.assert_allclose(es.values, [3, -1, -1, -1], atol=1e-12)
    _check_eigensystem(k4, es)


def test_edgeless_spectrum():
    es = full_spectrum(Graph.from_edges(5, []))
    assert np.all(es.values == 0)


def test_lift_k4_distinct():
    assert distinct_eigenvalues(hl2_lift(make_complete(4))) == [4.0, 2.0, 0.0, -2.0]


@given(graphs())
@settings(max_examples=40)
def test_full_spectrum_matches_dense_oracle(g):
    es = full_spectrum(g)
    ref = scipy.linalg.eigvalsh(dense(g.n, g.edges.tolist())) if g.n else np.zeros(0)
    np.testing.assert_allclose(es.values, np.sort(ref)[::-1], atol=1e-9)
    assert np.all(np.diff(es.values) <= 1e-12)
    _check_eigensystem(g, es)


def test_full_spectrum_cutoff():
    with pytest.raises(TooLarge):
        full_spectrum(make_cycle(50), dense_cutoff=10)


def test_sign_convention():
    v = np.array([[0.1, -0.5], [-0.7, 0.5], [0.2, 0.1]])
    out = canonical_signs(v)
    assert out[1, 0] > 0 and out[0, 1] > 0


@pytest.mark.parametrize("tie, expected", [
    ("positive", [4, 2, 2, 2, -2]),
    ("negative", [4, -2, -2, -2, -2]),
])
def test_top_k_tie_break(tie, expected):
    es = top_k_eigenpairs(hl2_lift(make_complete(4)), 5, tie_break=tie)
    np.testing.assert_allclose(es.values, expected, atol=1e-10)
    assert es.mode == "top-k"


def test_top_k_truncates(k4):
    assert top_k_eigenpairs(k4, 5).k == 4


def test_top_k_petersen(petersen):
    es = top_k_eigenpairs(petersen, 5)
    np.testing.assert_allclose(np.abs(es.values), [3, 2, 2, 2, 2], atol=1e-10)


def test_magnitude_order_stable():
    vals = np.array([1.0, -3.0, 3.0, 2.0, -2.0, 2.0])
    assert magnitude_order(vals).tolist() == [2, 1, 3, 5, 4, 0]
    assert magnitude_order(vals, "negative").tolist() == [1, 2, 4, 3, 5, 0]


LANCZOS_CASES = [make_petersen(), K4_TOWER[2], K4_TOWER[3], make_erdos_renyi(120, 0.05, 3),
                 make_random_regular(200, 3, 8), hl2_lift(make_random_regular(30, 3, 1))]


@pytest.mark.parametrize("g", LANCZOS_CASES, ids=lambda g: f"{g.label}-{g.n}")
def test_lanczos_agrees_with_dense(g):
    k = 5
    dense_es = top_k_eigenpairs(g, k)
    kry = top_k_eigenpairs(g, k, dense_cutoff=1)
    np.testing.assert_allclose(kry.values, dense_es.values, atol=1e-7)
    _check_eigensystem(g, kry)
    # compare eigenspaces: spectral projector over each magnitude class that
    # is entirely inside the selection is basis independent
    full = full_spectrum(g)
    for lam in set(np.round(kry.values, 6)):
        sel_k = np.abs(kry.values - lam) < 1e-6
        sel_f = np.abs(full.values - lam) < 1e-6
        if sel_k.sum() == sel_f.sum():
            pk = kry.vectors[:, sel_k] @ kry.vectors[:, sel_k].T
            pf = full.vectors[:, sel_f] @ full.vectors[:, sel_f].T
            np.testing.assert_allclose(pk, pf, atol=1e-7)


def test_block_lanczos_large_multiplicity():
    # eigenvalue 8 of the level-3 K4 lift has multiplicity far above k
    g = K4_TOWER[3]
    es = block_lanczos(g.adjacency(), 6, seed=3)
    np.testing.assert_allclose(es.values, [10, 8, 8, 8, 8, 8], atol=1e-8)


def test_distinct_eigenvalues_clusters():
    out = distinct_eigenvalues([1.0000001, 0.9999999, 0.5, 0.5 + 1e-9, -2, 0.25])
    assert out[0] == 1.0 and out[3] == -2.0
    assert out[1] == pytest.approx(0.5 + 5e-10, abs=1e-15)
    assert out[2] == 0.25
    assert distinct_eigenvalues(make_complete(4)) == [3.0, -1.0]
    assert distinct_eigenvalues([]) == []


@pytest.mark.parametrize("level, expected", [
    (0, [3, -1]),
    (1, [4, 2, 0, -2]),
    (2, [6, 4, 2, 0, -2]),
    (3, [10, 8, 6, 4, 2, 0, -2]),
])
def test_k4_tower_distinct(level, expected):
    assert distinct_eigenvalues(K4_TOWER[level]) == [float(x) for x in expected]


def test_predict_k4():
    pred = predict_lift_spectrum([3, -1, -1, -1], 3, 4, 6)
    np.testing.assert_allclose(pred, [4, 2, 2, 2] + [0] * 3 + [-2] * 5)
    assert distinct_eigenvalues(pred) == [4.0, 2.0, 0.0, -2.0]


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_predict_perron(d):
    g = make_complete(d + 1)
    assert predict_lift_spectrum_for(g)[0] == pytest.approx(2 * d - 2)


@pytest.mark.parametrize("g", regular_zoo(), ids=lambda g: g.label)
def test_predict_matches_constructed_lift(g):
    pred = predict_lift_spectrum_for(g)
    actual = scipy.linalg.eigvalsh(dense(2 * g.m, hl2_lift(g).edges.tolist()))
    np.testing.assert_allclose(np.sort(pred), np.sort(actual), atol=1e-8)
    assert actual.min() >= -2 - 1e-8
    assert pred[0] == pytest.approx(2 * g.regular_degree() - 2)


def test_predict_matching_graph():
    # d = 1: the lift is edgeless on 2m = n vertices
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    np.testing.assert_allclose(predict_lift_spectrum_for(g), np.zeros(4), atol=1e-12)


def test_predict_not_regular():
    with pytest.raises(NotRegular):
        predict_lift_spectrum_for(Graph.from_edges(3, [(0, 1), (1, 2)]))
    with pytest.raises(NotRegular):
        predict_lift_spectrum([1, 2, 3], 2, 3, 5)


def test_displayed_variant_differs():
    alt = predict_lift_spectrum([3, -1, -1, -1], 3, 4, 6, variant="displayed")
    assert distinct_eigenvalues(alt) == [7.0, 5.0, 3.0, 1.0]


def test_tower_spectrum_prediction():
    spec = full_spectrum(make_complete(4)).values
    preds = predict_tower_spectrum(spec, 3, 4, 6, 5)
    assert [p.size for p in preds] == [12, 48, 288, 2880, 51840]
    for lvl in (1, 2, 3):
        np.testing.assert_allclose(preds[lvl - 1], full_spectrum(K4_TOWER[lvl]).values, atol=1e-8)
    assert distinct_eigenvalues(preds[4]) == [float(x) for x in range(34, -3, -2)]
    prev = set(distinct_eigenvalues(preds[0]))
    for p in preds[1:]:
        cur = set(distinct_eigenvalues(p))
        assert prev <= cur
        prev = cur


def test_lift_min_eigenvalue_bound():
    for s in range(5):
        g = make_erdos_renyi(12, 0.4, s)
        if g.m:
            assert full_spectrum(hl2_lift(g)).values.min() >= -2 - 1e-8
