"""
Tests for the message-passing simulator
"""
import numpy as np
import pytest

from src.core.distsim import MessagePassingNetwork, simulate_arma, simulate_filter, simulate_fir
from src.core.exceptions import DimensionMismatchError, DivergentFilterError, LocalityViolationError
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
)
from src.core.generators import path_graph, random_community_graph
from src.core.nullspace import ShiftInvariantSpace
from src.core.shift import build_shift, normalize_spectral, spectral_norm, support_pattern

from .conftest import random_supported


def _community32():
    graph = random_community_graph(32, clusters=2, p_in=0.4, p_out=0.05, seed=11)
    return graph, normalize_spectral(build_shift(graph, "laplacian"))


def _make_filter(family, S, space, rng):
    supp = support_pattern(S)
    if family == "classical":
        return ClassicalFIR(taps=rng.standard_normal(4))
    if family == "nv":
        return NodeVariantFIR(taps=rng.standard_normal((4, S.n)))
    if family == "ev":
        return EdgeVariantFIR(mats=np.stack([random_supported(supp.mask, rng) for _ in range(3)]), support=supp)
    if family == "cev":
        return ConstrainedEV(mats=np.stack([random_supported(supp.mask, rng) for _ in range(3)]), support=supp)
    if family == "siev":
        return SIEV(alphas=rng.standard_normal((3, space.dim)), space=space, alpha0=rng.standard_normal(space.dim))
    return SICEV(alphas=rng.standard_normal((3, space.dim)), space=space)


def _make_arma(family, S, space, rng):
    supp = support_pattern(S)
    if family == "arma1":
        return ClassicalARMA1(psi=rng.uniform(-0.5, 0.5), phi=rng.standard_normal())
    if family == "evarma1":
        phi1 = random_supported(supp.mask, rng)
        return EVArma1(phi0=random_supported(supp.mask, rng), phi1=0.5 * phi1 / spectral_norm(phi1), support=supp)
    alpha1 = rng.standard_normal(space.dim)
    alpha1 = 0.5 * alpha1 / np.abs(space.basis.basis @ alpha1).max()
    return SIEVA1(alpha0=rng.standard_normal(space.dim), alpha1=alpha1, space=space)


# ─────────────────────────────────────────────────────────────────
# FIR recursions
# ─────────────────────────────────────────────────────────────────


def test_cev_simulation_matches_dense_operator(rng):
    graph, S = _community32()
    supp = support_pattern(S)
    f = ConstrainedEV(mats=np.stack([random_supported(supp.mask, rng) for _ in range(3)]), support=supp)
    x = rng.standard_normal(graph.n)
    y, trace = simulate_fir(graph, S, f, x)
    expected = f.dense(S) @ x
    assert np.linalg.norm(y - expected) <= 1e-9 * np.linalg.norm(expected)
    assert trace.rounds == 3
    assert trace.total_scalars_sent == 2 * graph.num_edges * 3
    assert trace.violations == []


@pytest.mark.parametrize("family", ["classical", "nv", "ev", "cev", "siev", "sicev"])
def test_every_fir_family_matches_dense(family, ring12, ring12_space, rng):
    graph, S = ring12
    f = _make_filter(family, S, ring12_space, rng)
    x = rng.standard_normal(graph.n)
    y, trace = simulate_filter(graph, S, f, x)
    expected = f.dense(S) @ x
    assert np.linalg.norm(y - expected) <= 1e-9 * max(np.linalg.norm(expected), 1.0)
    assert not trace.violations


def test_random_filters_match_dense_operator():
    families = ("classical", "nv", "ev", "cev", "siev", "sicev", "arma1", "evarma1", "sieva1")
    rng = np.random.default_rng(2024)
    for trial in range(100):
        family = families[trial % len(families)]
        n = int(rng.integers(6, 41))
        graph = random_community_graph(n, clusters=2, p_in=0.7, p_out=0.2, seed=trial)
        S = normalize_spectral(build_shift(graph, "laplacian"))
        space = ShiftInvariantSpace.from_shift(S) if family in ("siev", "sicev", "sieva1") else None
        if family in ("arma1", "evarma1", "sieva1"):
            f = _make_arma(family, S, space, rng)
        else:
            f = _make_filter(family, S, space, rng)
        x = rng.standard_normal(n)

        y, trace = simulate_filter(graph, S, f, x, max_rounds=2000, tol=1e-12)
        expected = f.dense(S) @ x
        assert np.linalg.norm(y - expected) <= 1e-9 * np.linalg.norm(expected), (trial, family)
        assert trace.violations == []
        if not f.is_arma:
            assert trace.total_scalars_sent == 2 * graph.num_edges * f.order


def test_complex_cev_simulation(ring12, ring12_support, rng):
    graph, S = ring12
    f = ConstrainedEV(
        mats=np.stack([random_supported(ring12_support.mask, rng, dtype=complex) for _ in range(2)]),
        support=ring12_support,
    )
    x = rng.standard_normal(graph.n) + 1j * rng.standard_normal(graph.n)
    y, _ = simulate_fir(graph, S, f, x)
    expected = f.dense(S) @ x
    assert np.linalg.norm(y - expected) <= 1e-9 * np.linalg.norm(expected)


def test_simulation_is_deterministic(ring12, ring12_support, rng):
    graph, S = ring12
    f = ConstrainedEV(mats=np.stack([random_supported(ring12_support.mask, rng) for _ in range(3)]),
                      support=ring12_support)
    x = rng.standard_normal(graph.n)
    y1, t1 = simulate_fir(graph, S, f, x)
    y2, t2 = simulate_fir(graph, S, f, x)
    assert np.array_equal(y1, y2)
    assert t1.records() == t2.records()


def test_message_dump_matches_counts(ring12, rng):
    graph, S = ring12
    f = ClassicalFIR(taps=[1.0, 0.5, 0.25])
    _, trace = simulate_fir(graph, S, f, rng.standard_normal(graph.n), record_messages=True)
    assert len(trace.messages) == sum(trace.messages_per_round)
    assert all(m["sender"] in graph.neighbor_lists()[m["receiver"]] for m in trace.messages)
    assert [r["round"] for r in trace.records()] == [1, 2]


def test_nonlocal_weights_are_rejected(path6):
    graph, _ = path6
    net = MessagePassingNetwork(graph)
    dense = np.ones((graph.n, graph.n))
    with pytest.raises(LocalityViolationError):
        net.local_weights(dense, "Phi_1")
    with pytest.raises(DimensionMismatchError):
        net.local_weights(np.eye(3), "Phi_1")


def test_wrong_signal_length(ring12):
    graph, S = ring12
    with pytest.raises(DimensionMismatchError):
        simulate_fir(graph, S, ClassicalFIR(taps=[1.0]), np.ones(5))


# ─────────────────────────────────────────────────────────────────
# ARMA recursion
# ─────────────────────────────────────────────────────────────────


def test_arma_simulation_follows_dense_recursion(ring12, rng):
    graph, S = ring12
    phi1 = 0.5 * S.matrix
    phi0 = 0.8 * np.eye(graph.n)
    x = rng.standard_normal(graph.n)
    trajectory, trace = simulate_arma(graph, phi0, phi1, x, max_rounds=30, tol=0.0)
    y = np.zeros(graph.n)
    for t in range(1, 31):
        y = phi1 @ y + phi0 @ x
        assert np.linalg.norm(trajectory[t] - y) <= 1e-12 * max(np.linalg.norm(y), 1.0)
    assert len(trajectory) == 31
    assert trace.rounds == 30


def test_arma_without_feedback_settles_in_one_round(ring12, rng):
    graph, _ = ring12
    phi0 = np.diag(rng.standard_normal(graph.n))
    x = rng.standard_normal(graph.n)
    trajectory, _ = simulate_arma(graph, phi0, np.zeros((graph.n, graph.n)), x)
    assert np.allclose(trajectory[0], 0.0)
    assert np.allclose(trajectory[1], phi0 @ x, atol=1e-14)


def test_arma_divergence_is_detected(ring12, rng):
    graph, _ = ring12
    with pytest.raises(DivergentFilterError):
        simulate_arma(graph, np.eye(graph.n), 2.0 * np.eye(graph.n), rng.standard_normal(graph.n))


def test_arma_rejects_nonlocal_feedforward(path6):
    graph, _ = path6
    with pytest.raises(LocalityViolationError):
        simulate_arma(graph, np.ones((graph.n, graph.n)), np.zeros((graph.n, graph.n)), np.ones(graph.n))


def test_simulate_filter_runs_ev_arma(ring12, ring12_support, rng):
    graph, S = ring12
    phi1 = random_supported(ring12_support.mask, rng)
    phi1 *= 0.6 / np.linalg.norm(phi1, 2)
    f = EVArma1(phi0=random_supported(ring12_support.mask, rng), phi1=phi1, support=ring12_support)
    x = rng.standard_normal(graph.n)
    y, trace = simulate_filter(graph, S, f, x, tol=1e-13)
    expected = f.dense(S) @ x
    assert np.linalg.norm(y - expected) <= 1e-9 * np.linalg.norm(expected)
    assert not trace.violations
