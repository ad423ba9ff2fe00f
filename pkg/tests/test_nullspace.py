"""
Tests for the support-compatible eigenvalue subspace
"""
from itertools import combinations

import numpy as np
import pytest

from src.core.exceptions import DimensionMismatchError, SupportViolationError
from src.core.generators import complete_graph, path_graph, ring_graph
from src.core.models import Graph, NullspaceBasis
from src.core.nullspace import (
    ShiftInvariantSpace,
    constraint_matrix,
    nullspace_basis,
    synthesize,
)
from src.core.shift import build_shift, eigendecompose, support_pattern


def _space(graph, kind="laplacian", rank_tol=1e-9):
    return ShiftInvariantSpace.from_shift(build_shift(graph, kind), rank_tol=rank_tol)


def test_basis_is_orthonormal_and_in_kernel(community16):
    _, S = community16
    dec = eigendecompose(S)
    T = constraint_matrix(dec, support_pattern(S))
    basis = nullspace_basis(T)
    B = basis.basis
    assert basis.dim >= 1
    assert np.abs(B.conj().T @ B - np.eye(basis.dim)).max() <= 1e-10
    assert np.linalg.norm(T @ B, axis=0).max() <= max(basis.tolerance, 1e-12) * 10


def test_all_ones_is_admissible(community16):
    _, S = community16
    T = constraint_matrix(eigendecompose(S), support_pattern(S))
    assert np.linalg.norm(T @ np.ones(S.n)) <= 1e-10 * np.linalg.norm(T)


def test_three_node_path_keeps_corner_zeros(rng):
    S = build_shift(path_graph(3), "laplacian")
    space = ShiftInvariantSpace.from_shift(S)
    for _ in range(20):
        alpha = rng.standard_normal(space.dim)
        A = synthesize(space.decomposition, space.basis, alpha)
        assert abs(A[0, 2]) <= 1e-10
        assert abs(A[2, 0]) <= 1e-10


def test_rank_tolerance_stability():
    graph = ring_graph(8)
    assert _space(graph, "adjacency", 1e-9).dim == _space(graph, "adjacency", 1e-8).dim


def test_synthesized_matrices_commute_and_respect_support(community16, rng):
    _, S = community16
    space = ShiftInvariantSpace.from_shift(S)
    for _ in range(10):
        alpha = rng.standard_normal(space.dim)
        A = space.synthesize(alpha)
        residual = np.linalg.norm(A @ S.matrix - S.matrix @ A)
        assert residual <= 1e-8 * np.linalg.norm(A) * np.linalg.norm(S.matrix)
        assert space.support.leakage(A) == 0.0


def test_path_laplacian_space_is_spanned_by_identity_and_shift():
    # commuting tridiagonal matrices of a path with distinct eigenvalues are a I + b S
    space = _space(path_graph(4))
    assert space.dim == 2
    B = space.basis.basis
    projector = B @ B.conj().T
    for omega in (np.ones(4), space.eigvals):
        assert np.linalg.norm(projector @ omega - omega) <= 1e-7 * np.linalg.norm(omega)


def test_complete_graph_admits_every_eigenvalue_vector():
    space = _space(complete_graph(5))
    assert space.dim == 5


def test_project_recovers_coefficients(ring12_space, rng):
    alpha = rng.standard_normal(ring12_space.dim)
    omega = ring12_space.basis.basis @ alpha
    assert np.allclose(ring12_space.project(omega), alpha, atol=1e-10)


def test_synthesize_checks_length(ring12_space):
    with pytest.raises(DimensionMismatchError):
        ring12_space.synthesize(np.ones(ring12_space.dim + 1))


def test_synthesize_rejects_vectors_outside_the_span():
    S = build_shift(path_graph(4), "laplacian")
    space = ShiftInvariantSpace.from_shift(S)
    dec = space.decomposition
    # an eigenvalue vector with an independent S^2 component leaks onto the zero set
    lam = dec.eigvals
    full = NullspaceBasis(basis=np.eye(4), dim=4, singular_values=np.zeros(0), tolerance=0.0)
    wide = ShiftInvariantSpace(decomposition=dec, support=space.support, basis=full)
    with pytest.raises(SupportViolationError):
        wide.synthesize(lam ** 2)


def test_basis_document_round_trip(ring12_space):
    restored = NullspaceBasis.from_dict(ring12_space.basis.to_dict())
    assert restored.dim == ring12_space.dim
    assert np.array_equal(restored.basis, ring12_space.basis.basis)


def _brute_force_kernel(dec, supp, tol=1e-12) -> np.ndarray:
    """Kernel of w -> (U diag(w) U^-1) on the zero set, with an absolute cutoff"""
    n = dec.n
    zeros = supp.zero_indices
    if zeros.shape[0] == 0:
        return np.eye(n)
    M = np.empty((zeros.shape[0], n), dtype=complex)
    for k in range(n):
        A = (dec.eigvecs * np.eye(n)[k]) @ dec.inv_eigvecs
        M[:, k] = A[zeros[:, 0], zeros[:, 1]]
    _, s, Vh = np.linalg.svd(M)
    rank = int(np.count_nonzero(s > tol))
    return Vh[rank:].conj().T


def _assert_complete(space):
    kernel = _brute_force_kernel(space.decomposition, space.support)
    B = space.basis.basis
    assert space.dim == kernel.shape[1]
    assert np.linalg.norm(B @ (B.conj().T @ kernel) - kernel) <= 1e-8 * max(1, kernel.shape[1])


def test_roundoff_constraints_keep_full_kernel(rng):
    T = 1e-17 * rng.standard_normal((4, 3))
    basis = nullspace_basis(T)
    assert basis.dim == 3
    assert basis.tolerance > basis.singular_values.max()


def test_isolated_vertex_keeps_every_direction():
    S = build_shift(Graph(n=3, edges=[(0, 2, 1.72)]), "laplacian")
    _assert_complete(ShiftInvariantSpace.from_shift(S))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_basis_is_complete_on_small_graphs(n):
    rng = np.random.default_rng(n)
    pairs = list(combinations(range(n), 2))
    masks = np.arange(1, 2 ** len(pairs))
    if masks.size > 150:
        masks = rng.choice(masks, size=150, replace=False)
    for mask in masks:
        edges = [(i, j, float(rng.uniform(0.5, 2.0))) for b, (i, j) in enumerate(pairs) if int(mask) >> b & 1]
        _assert_complete(ShiftInvariantSpace.from_shift(build_shift(Graph(n=n, edges=edges), "laplacian")))
