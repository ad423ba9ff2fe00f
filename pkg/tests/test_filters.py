"""
Tests for the filter families, their recursions and their documents
"""
import json

import numpy as np
import pytest
import scipy.linalg

from src.core.exceptions import (
    ConfigError,
    DimensionMismatchError,
    DivergentFilterError,
    SingularModeError,
    SupportViolationError,
    UnsupportedKindError,
)
from src.core.filters import (
    SICEV,
    SIEV,
    SIEVA1,
    ClassicalARMA1,
    ClassicalFIR,
    ConstrainedEV,
    EdgeVariantFIR,
    EVArma1,
    NodeVariantFIR,
    apply_recursive,
    arma_iterate,
    filter_from_dict,
    filter_to_dict,
    measure_convergence_rate,
    modal_response,
)
from src.core.nullspace import ShiftInvariantSpace
from src.core.shift import eigendecompose, support_pattern

from .conftest import random_supported


def _relative(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


# ─────────────────────────────────────────────────────────────────
# FIR families
# ─────────────────────────────────────────────────────────────────


def test_edge_variant_matches_chained_products(ring12, ring12_support, rng):
    _, S = ring12
    P1, P2, P3 = (random_supported(ring12_support.mask, rng) for _ in range(3))
    f = EdgeVariantFIR(mats=np.stack([P1, P2, P3]), support=ring12_support)
    expected = P1 + P2 @ P1 + P3 @ P2 @ P1
    assert np.abs(f.dense(S) - expected).max() <= 1e-12 * np.abs(expected).max()
    assert f.order == 3


def test_constrained_edge_variant_dense_form(ring12, ring12_support, rng):
    _, S = ring12
    mats = [random_supported(ring12_support.mask, rng) for _ in range(3)]
    f = ConstrainedEV(mats=np.stack(mats), support=ring12_support)
    expected = mats[0] + mats[1] @ S.matrix + mats[2] @ S.matrix @ S.matrix
    assert np.allclose(f.dense(S), expected, atol=1e-12)


def test_reduction_chain(ring12):
    _, S = ring12
    taps = np.array([0.5, -0.3, 0.2])
    classical = ClassicalFIR(taps=taps)
    node_variant = NodeVariantFIR(taps=np.repeat(taps[:, None], S.n, axis=1))
    constrained = ConstrainedEV(mats=np.stack([t * np.eye(S.n) for t in taps]), support=support_pattern(S))
    H = classical.dense(S)
    assert np.abs(node_variant.dense(S) - H).max() <= 1e-12
    assert np.abs(constrained.dense(S) - H).max() <= 1e-12


@pytest.mark.parametrize("family", ["classical", "nv", "ev", "cev"])
def test_recursion_matches_dense(family, ring12, ring12_support, rng):
    _, S = ring12
    if family == "classical":
        f = ClassicalFIR(taps=rng.standard_normal(4))
    elif family == "nv":
        f = NodeVariantFIR(taps=rng.standard_normal((4, S.n)))
    else:
        mats = np.stack([random_supported(ring12_support.mask, rng) for _ in range(3)])
        f = (EdgeVariantFIR if family == "ev" else ConstrainedEV)(mats=mats, support=ring12_support)
    x = rng.standard_normal(S.n)
    assert _relative(apply_recursive(f, S, x), f.dense(S) @ x) <= 1e-12


def test_support_violation_is_rejected(ring12_support):
    bad = np.zeros((1, 12, 12))
    bad[0, 0, 5] = 1.0
    with pytest.raises(SupportViolationError):
        EdgeVariantFIR(mats=bad, support=ring12_support)


def test_coefficients_are_read_only():
    f = ClassicalFIR(taps=[1.0, 2.0])
    with pytest.raises(ValueError):
        f.taps[0] = 3.0


def test_truncation_keeps_leading_terms(ring12, ring12_support, rng):
    _, S = ring12
    mats = np.stack([random_supported(ring12_support.mask, rng) for _ in range(4)])
    f = ConstrainedEV(mats=mats, support=ring12_support)
    assert f.truncated(2).order == 2
    assert np.allclose(f.truncated(2).dense(S), mats[0] + mats[1] @ S.matrix)
    assert ClassicalFIR(taps=[1.0, 2.0, 3.0]).truncated(1).taps.tolist() == [1.0, 2.0]


def test_wrong_signal_length(ring12):
    _, S = ring12
    with pytest.raises(DimensionMismatchError):
        apply_recursive(ClassicalFIR(taps=[1.0]), S, np.ones(5))


# ─────────────────────────────────────────────────────────────────
# Shift-invariant families
# ─────────────────────────────────────────────────────────────────


def _modal_view(S, H):
    dec = eigendecompose(S)
    return np.diag(dec.inv_eigvecs @ H @ dec.eigvecs)


def test_sicev_modal_response_matches_dense(community16, rng):
    _, S = community16
    space = ShiftInvariantSpace.from_shift(S)
    f = SICEV(alphas=rng.standard_normal((3, space.dim)), space=space)
    H = f.dense(S)
    assert np.abs(_modal_view(S, H) - f.modal()).max() <= 1e-8 * max(1.0, np.abs(H).max())
    assert np.linalg.norm(H @ S.matrix - S.matrix @ H) <= 1e-8 * np.linalg.norm(H) * np.linalg.norm(S.matrix)


def test_siev_modal_response_includes_direct_term(ring12, ring12_space, rng):
    _, S = ring12
    d = ring12_space.dim
    f = SIEV(alphas=rng.standard_normal((2, d)), space=ring12_space, alpha0=rng.standard_normal(d))
    H = f.dense(S)
    assert np.abs(_modal_view(S, H) - f.modal()).max() <= 1e-8 * max(1.0, np.abs(H).max())
    x = rng.standard_normal(S.n)
    assert _relative(f.apply(S, x), H @ x) <= 1e-12
    assert np.allclose(modal_response(f).values, f.modal())


def test_sieva1_modal_response(ring12, ring12_space):
    _, S = ring12
    B = ring12_space.basis.basis
    # alpha1 chosen so that B alpha1 = 0.5 * ones keeps the feedback contractive
    alpha1 = ring12_space.project(0.5 * np.ones(S.n))
    alpha0 = ring12_space.project(np.ones(S.n))
    f = SIEVA1(alpha0=alpha0, alpha1=alpha1, space=ring12_space)
    assert np.allclose(B @ alpha1, 0.5)
    assert np.allclose(f.modal(), 2.0)
    assert np.allclose(f.dense(S), 2.0 * np.eye(S.n), atol=1e-10)
    assert f.is_arma and f.n == S.n


def test_modal_response_needs_shift_invariance(ring12_support):
    f = EdgeVariantFIR(mats=np.eye(12)[None, :, :], support=ring12_support)
    with pytest.raises(UnsupportedKindError):
        modal_response(f)
    with pytest.raises(UnsupportedKindError):
        modal_response(ClassicalFIR(taps=[1.0]))


# ─────────────────────────────────────────────────────────────────
# ARMA recursions
# ─────────────────────────────────────────────────────────────────


def test_classical_arma_solves_tikhonov(ring12, rng):
    _, S = ring12
    x = rng.standard_normal(S.n)
    f = ClassicalARMA1(psi=-0.8, phi=1.0)
    run = f.run(S, x)
    expected = scipy.linalg.solve(np.eye(S.n) + 0.8 * S.matrix, x)
    assert run.converged
    assert np.abs(run.output - expected).max() <= 1e-6
    assert np.allclose(f.dense(S), np.linalg.inv(np.eye(S.n) + 0.8 * S.matrix))


def test_classical_arma_convergence_rate_on_complete_graph(complete8, rng):
    _, S = complete8
    x = rng.standard_normal(S.n)
    f = ClassicalARMA1(psi=-0.8, phi=1.0)
    run = f.run(S, x, keep_trajectory=True)
    rate = measure_convergence_rate(run.trajectory, f.dense(S) @ x)
    assert abs(rate - 0.8) <= 1e-3


def test_classical_arma_singular_mode():
    f = ClassicalARMA1(psi=0.5, phi=1.0)
    with pytest.raises(SingularModeError):
        f.modal(np.array([0.0, 2.0]))


def test_noncontractive_feedback_is_rejected(ring12, ring12_support):
    _, S = ring12
    f = EVArma1(phi0=np.eye(12), phi1=1.5 * np.eye(12), support=ring12_support)
    with pytest.raises(DivergentFilterError):
        f.dense(S)


def test_arma_iteration_detects_growth():
    with pytest.raises(DivergentFilterError):
        arma_iterate(2.0 * np.eye(3), np.ones(3))


def test_arma_iteration_hits_cap():
    run = arma_iterate(0.99 * np.eye(2), np.ones(2), tol=1e-14, max_iter=5)
    assert not run.converged
    assert run.iterations == 5


def test_measure_convergence_rate_geometric():
    trajectory = [0.5 ** t * np.ones(3) for t in range(30)]
    assert abs(measure_convergence_rate(trajectory, np.zeros(3)) - 0.5) <= 1e-12
    assert measure_convergence_rate([np.ones(2)], np.zeros(2)) == 0.0


# ─────────────────────────────────────────────────────────────────
# Filter documents
# ─────────────────────────────────────────────────────────────────


def test_edge_variant_document(ring12, ring12_support, rng):
    _, S = ring12
    mats = np.stack([random_supported(ring12_support.mask, rng) for _ in range(2)])
    f = EdgeVariantFIR(mats=mats, support=ring12_support)
    doc = json.loads(json.dumps(filter_to_dict(f)))
    assert doc["family"] == "ev" and doc["order"] == 2 and doc["field"] == "real"
    # only supported entries are stored
    assert len(doc["mats"][0]) == np.count_nonzero(mats[0])
    restored = filter_from_dict(doc, support=ring12_support)
    assert np.array_equal(restored.dense(S), f.dense(S))


def test_siev_document_embeds_basis(ring12, ring12_space, rng):
    _, S = ring12
    d = ring12_space.dim
    f = SIEV(alphas=rng.standard_normal((2, d)), space=ring12_space, alpha0=rng.standard_normal(d))
    doc = json.loads(json.dumps(filter_to_dict(f)))
    assert "basis" in doc
    restored = filter_from_dict(doc, space=ring12_space)
    assert np.allclose(restored.dense(S), f.dense(S), atol=1e-12)


def test_complex_values_are_pairs():
    f = ClassicalARMA1(psi=0.1 + 0.2j, phi=1.0)
    doc = filter_to_dict(f)
    assert doc["psi"] == [0.1, 0.2]
    assert doc["field"] == "complex"
    assert filter_from_dict(doc).psi == 0.1 + 0.2j


def test_documents_need_context():
    with pytest.raises(ConfigError):
        filter_from_dict({"family": "cev", "mats": []})
    with pytest.raises(ConfigError):
        filter_from_dict({"family": "unknown"})
    with pytest.raises(ConfigError):
        filter_from_dict({})
