"""
Graph generators: deterministic topologies and seeded random graphs
"""
import logging
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from .exceptions import ConnectivityError, InvalidParameterError
from .models import Graph

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 50


def ring_graph(n: int) -> Graph:
    """Cycle 0-1-...-(n-1)-0"""
    if n < 3:
        raise InvalidParameterError(f"Ring graph needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    return Graph(n=n, edges=edges, name=f"ring{n}")


def path_graph(n: int) -> Graph:
    """Path 0-1-...-(n-1)"""
    if n < 1:
        raise InvalidParameterError(f"Path graph needs n >= 1, got {n}")
    edges = [(i, i + 1, 1.0) for i in range(n - 1)]
    return Graph(n=n, edges=edges, name=f"path{n}")


def grid_graph(rows: int, cols: int) -> Graph:
    """Rectangular lattice, vertex id r * cols + c"""
    if rows < 1 or cols < 1:
        raise InvalidParameterError(f"Grid needs positive dimensions, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, 1.0))
            if r + 1 < rows:
                edges.append((v, v + cols, 1.0))
    coords = np.array([[c, r] for r in range(rows) for c in range(cols)], dtype=float)
    return Graph(n=rows * cols, edges=edges, coordinates=coords, name=f"grid{rows}x{cols}")


def complete_graph(n: int) -> Graph:
    """All pairs connected"""
    if n < 1:
        raise InvalidParameterError(f"Complete graph needs n >= 1, got {n}")
    edges = [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)]
    return Graph(n=n, edges=edges, name=f"complete{n}")


def star_graph(n: int) -> Graph:
    """Hub 0 joined to vertices 1..n-1"""
    if n < 2:
        raise InvalidParameterError(f"Star graph needs n >= 2, got {n}")
    edges = [(0, j, 1.0) for j in range(1, n)]
    return Graph(n=n, edges=edges, name=f"star{n}")


def _attempt_seed(seed: int, attempt: int) -> int:
    """Independent 32-bit seed for one regeneration attempt under a base seed"""
    if seed < 0:
        raise InvalidParameterError(f"seed must be nonnegative, got {seed}")
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def _block_sizes(n: int, clusters: int) -> List[int]:
    base, extra = divmod(n, clusters)
    return [base + (1 if c < extra else 0) for c in range(clusters)]


def random_community_graph(n: int, clusters: int = 4, p_in: float = 0.3, p_out: float = 0.02,
                           seed: int = 0, max_retries: int = DEFAULT_RETRIES) -> Graph:
    """
    Stochastic block model graph with equal-sized communities

    Attempt r draws from a seed derived from (seed, r), so the result is a
    pure function of the arguments and distinct seeds never share attempts.

    Args:
        n: Vertex count
        clusters: Number of communities
        p_in: Edge probability inside a community
        p_out: Edge probability across communities
        seed: Base random seed
        max_retries: Regeneration budget for a connected realization

    Returns:
        Connected Graph
    """
    if n <= 0:
        raise InvalidParameterError(f"n must be positive, got {n}")
    if not 1 <= clusters <= n:
        raise InvalidParameterError(f"clusters must be in [1, n], got {clusters}")
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise InvalidParameterError(f"Need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")

    sizes = _block_sizes(n, clusters)
    probs = [[p_in if a == b else p_out for b in range(clusters)] for a in range(clusters)]

    for attempt in range(max_retries):
        g = nx.stochastic_block_model(sizes, probs, seed=_attempt_seed(seed, attempt))
        if n == 1 or nx.is_connected(g):
            edges = sorted((min(u, v), max(u, v), 1.0) for u, v in g.edges())
            logger.info(f"Community graph n={n} connected after {attempt + 1} attempt(s), M={len(edges)}")
            return Graph(n=n, edges=edges, name=f"community{n}")
        logger.debug(f"Community graph attempt {attempt + 1} disconnected")

    logger.error(f"No connected community graph within {max_retries} attempts")
    raise ConnectivityError(f"No connected community graph within {max_retries} attempts")


def knn_geometric_graph(points: Sequence[Sequence[float]], k: int) -> Graph:
    """
    Symmetrized k-nearest-neighbor graph

    An edge is kept when either endpoint selects the other among its k nearest
    points. Ties are resolved by the KD-tree query order.

    Args:
        points: n x 2 coordinates
        k: Neighbors selected per point

    Returns:
        Graph carrying the coordinates
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if k < 1 or k >= n:
        raise InvalidParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")

    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=k + 1)

    pairs = set()
    for i in range(n):
        selected = [int(j) for j in idx[i] if int(j) != i][:k]
        for j in selected:
            pairs.add((min(i, j), max(i, j)))

    edges = [(i, j, 1.0) for i, j in sorted(pairs)]
    graph = Graph(n=n, edges=edges, coordinates=pts, name=f"knn{k}")
    if not graph.is_connected():
        logger.warning(f"k-NN graph with k={k} is disconnected")
    return graph


def random_points(n: int, side: float = 1.0, seed: int = 0) -> np.ndarray:
    """Uniform positions in [0, side]^2"""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, side, size=(n, 2))


def random_knn_graph(n: int, k: int, side: float = 1.0, seed: int = 0,
                     max_retries: int = DEFAULT_RETRIES) -> Graph:
    """
    k-NN graph over random positions, redrawn until connected

    Args:
        n: Vertex count
        k: Neighbors per point
        side: Square side length
        seed: Base random seed (attempt r uses a seed derived from (seed, r))
        max_retries: Regeneration budget

    Returns:
        Connected Graph with coordinates
    """
    for attempt in range(max_retries):
        graph = knn_geometric_graph(random_points(n, side, _attempt_seed(seed, attempt)), k)
        if graph.is_connected():
            return graph
    logger.error(f"No connected k-NN graph within {max_retries} attempts")
    raise ConnectivityError(f"No connected k-NN graph within {max_retries} attempts")


def _grid_shape(n: int, rows: Optional[int], cols: Optional[int]) -> Tuple[int, int]:
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    if rows is None and cols is None:
        rows = max(r for r in range(1, int(np.sqrt(n)) + 1) if n % r == 0)
    elif rows is None:
        rows = n // cols if n % cols == 0 else 0
    if cols is None:
        cols = n // rows if rows and n % rows == 0 else 0
    if rows * cols != n:
        logger.error(f"Grid of {n} vertices cannot be laid out with rows={rows}, cols={cols}")
        raise InvalidParameterError(f"Grid dimensions must multiply to n={n}")
    return rows, cols


def make_graph(generator: str, n: int, seed: int = 0, clusters: int = 4, p_in: float = 0.3,
               p_out: float = 0.02, k: int = 8, side: float = 1.0,
               rows: Optional[int] = None, cols: Optional[int] = None) -> Graph:
    """
    Dispatch to a named generator

    Args:
        generator: ring, path, grid, complete, star, community or knn
        n: Vertex count (grid factors it as rows x cols, most square when neither is given)

    Returns:
        Graph
    """
    if generator == "ring":
        return ring_graph(n)
    if generator == "path":
        return path_graph(n)
    if generator == "complete":
        return complete_graph(n)
    if generator == "star":
        return star_graph(n)
    if generator == "grid":
        rows, cols = _grid_shape(n, rows, cols)
        return grid_graph(rows, cols)
    if generator == "community":
        return random_community_graph(n, clusters, p_in, p_out, seed)
    if generator == "knn":
        return random_knn_graph(n, k, side, seed)
    raise InvalidParameterError(f"Unknown graph generator: {generator}")
