"""
Shared fixtures: small deterministic graphs and their shift operators
"""
import numpy as np
import pytest

from src.core.generators import complete_graph, path_graph, random_community_graph, ring_graph
from src.core.nullspace import ShiftInvariantSpace
from src.core.shift import build_shift, normalize_spectral, support_pattern


def random_supported(mask: np.ndarray, rng: np.random.Generator, dtype=float) -> np.ndarray:
    """Random matrix with entries only on the allowed support"""
    M = rng.standard_normal(mask.shape)
    if dtype is complex:
        M = M + 1j * rng.standard_normal(mask.shape)
    return np.where(mask, M, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def ring12():
    graph = ring_graph(12)
    return graph, normalize_spectral(build_shift(graph, "laplacian"))


@pytest.fixture
def path6():
    graph = path_graph(6)
    return graph, build_shift(graph, "laplacian")


@pytest.fixture
def community16():
    graph = random_community_graph(16, clusters=2, p_in=0.6, p_out=0.1, seed=3)
    return graph, normalize_spectral(build_shift(graph, "laplacian"))


@pytest.fixture
def complete8():
    graph = complete_graph(8)
    return graph, normalize_spectral(build_shift(graph, "laplacian"))


@pytest.fixture
def ring12_space(ring12):
    _, S = ring12
    return ShiftInvariantSpace.from_shift(S)


@pytest.fixture
def ring12_support(ring12):
    _, S = ring12
    return support_pattern(S)
