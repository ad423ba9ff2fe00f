"""
Tests for graph models, shift operators and the graph Fourier transform
"""
import numpy as np
import pytest

from src.core.exceptions import (
    DefectiveOperatorError,
    DegenerateInputError,
    DimensionMismatchError,
    InvalidParameterError,
    UnsupportedKindError,
)
from src.core.generators import complete_graph, random_community_graph, ring_graph
from src.core.models import Graph, ShiftKind, as_graph_signal
from src.core.shift import (
    build_shift,
    eigendecompose,
    gft,
    igft,
    normalize_spectral,
    spectral_norm,
    support_pattern,
)


# ─────────────────────────────────────────────────────────────────
# Graph model
# ─────────────────────────────────────────────────────────────────


def test_undirected_adjacency_is_symmetric():
    graph = Graph(n=4, edges=[(0, 1, 2.0), (1, 2), (3, 2, 0.5)])
    W = graph.adjacency()
    assert np.array_equal(W, W.T)
    assert graph.num_edges == 3
    assert W[2, 3] == 0.5
    assert graph.neighbor_lists() == [(1,), (0, 2), (1, 3), (2,)]


def test_graph_rejects_self_loops_and_duplicates():
    with pytest.raises(InvalidParameterError):
        Graph(n=3, edges=[(1, 1, 1.0)])
    with pytest.raises(InvalidParameterError):
        Graph(n=3, edges=[(0, 1), (1, 0)])
    with pytest.raises(InvalidParameterError):
        Graph(n=3, edges=[(0, 3)])


def test_directed_graph_keeps_both_orientations():
    graph = Graph(n=2, edges=[(0, 1), (1, 0)], directed=True)
    assert graph.num_edges == 2


def test_as_graph_signal_checks_length():
    with pytest.raises(DimensionMismatchError):
        as_graph_signal(np.ones(3), 4)


# ─────────────────────────────────────────────────────────────────
# Shift operators
# ─────────────────────────────────────────────────────────────────


def test_laplacian_rows_sum_to_zero_on_community_graph():
    graph = random_community_graph(64, clusters=4, p_in=0.3, p_out=0.02, seed=0)
    S = build_shift(graph, "laplacian")
    assert S.kind == ShiftKind.LAPLACIAN
    assert np.abs(S.matrix.sum(axis=1)).max() <= 1e-12 * graph.degrees().max()
    assert eigendecompose(S).eigvals.min() >= -1e-10


def test_normalized_laplacian_has_unit_diagonal():
    S = build_shift(ring_graph(6), "normalized-laplacian")
    assert np.allclose(np.diag(S.matrix), 1.0)
    assert np.allclose(S.matrix, S.matrix.T)


def test_laplacian_of_directed_graph_is_unsupported():
    graph = Graph(n=3, edges=[(0, 1), (1, 2)], directed=True)
    with pytest.raises(UnsupportedKindError):
        build_shift(graph, "laplacian")
    assert build_shift(graph, "adjacency").matrix[0, 1] == 1.0


def test_unknown_kind_and_missing_custom_matrix():
    graph = ring_graph(5)
    with pytest.raises(UnsupportedKindError):
        build_shift(graph, "random-walk")
    with pytest.raises(UnsupportedKindError):
        build_shift(graph, "custom")
    with pytest.raises(DimensionMismatchError):
        build_shift(graph, "custom", matrix=np.eye(4))


def test_complex_field_is_carried():
    S = build_shift(ring_graph(5), "laplacian", field="complex")
    assert S.field == "complex"
    assert np.iscomplexobj(S.matrix)


# ─────────────────────────────────────────────────────────────────
# Spectral decomposition
# ─────────────────────────────────────────────────────────────────


@pytest.mark.parametrize("kind", ["laplacian", "adjacency", "normalized-laplacian"])
def test_eigendecomposition_reconstructs(kind):
    graph = random_community_graph(32, clusters=2, p_in=0.5, p_out=0.05, seed=11)
    S = build_shift(graph, kind)
    dec = eigendecompose(S)
    scale = np.abs(S.matrix).max()
    assert np.abs(dec.reconstruct() - S.matrix).max() <= 1e-8 * scale
    assert np.abs(dec.eigvecs @ dec.inv_eigvecs - np.eye(32)).max() <= 1e-10
    # symmetric shifts get an orthonormal eigenbasis
    assert np.allclose(dec.inv_eigvecs, dec.eigvecs.T)
    assert np.all(np.diff(dec.eigvals) >= 0)


def test_eigendecomposition_of_directed_cycle():
    graph = Graph(n=5, edges=[(i, (i + 1) % 5) for i in range(5)], directed=True)
    S = build_shift(graph, "adjacency")
    dec = eigendecompose(S)
    assert np.iscomplexobj(dec.eigvals)
    assert np.allclose(np.abs(dec.eigvals), 1.0)
    assert np.abs(dec.reconstruct() - S.matrix).max() <= 1e-8


def test_defective_shift_is_rejected():
    graph = Graph(n=2, edges=[(0, 1)], directed=True)
    with pytest.raises(DefectiveOperatorError):
        eigendecompose(build_shift(graph, "adjacency"))


def test_gft_round_trip(rng):
    S = build_shift(ring_graph(16), "laplacian")
    dec = eigendecompose(S)
    x = rng.standard_normal(16)
    assert np.allclose(igft(dec, gft(dec, x)), x, atol=1e-10)


# ─────────────────────────────────────────────────────────────────
# Support and scaling
# ─────────────────────────────────────────────────────────────────


def test_ring_zero_set_size():
    supp = support_pattern(build_shift(ring_graph(20), "laplacian"))
    assert supp.zero_indices.shape[0] == 20 * 20 - 3 * 20
    assert supp.num_allowed == 60


def test_complete_graph_has_empty_zero_set():
    supp = support_pattern(build_shift(complete_graph(5), "laplacian"))
    assert supp.zero_indices.shape[0] == 0


def test_normalize_spectral_gives_unit_norm(rng):
    M = rng.standard_normal((8, 8))
    M = M + M.T
    S = build_shift(complete_graph(8), "custom", matrix=M)
    S_unit = normalize_spectral(S)
    assert abs(spectral_norm(S_unit.matrix) - 1.0) <= 1e-10
    assert S_unit.kind == ShiftKind.CUSTOM


def test_normalize_zero_shift_fails():
    S = build_shift(Graph(n=3), "laplacian")
    with pytest.raises(DegenerateInputError):
        normalize_spectral(S)
