"""
Data models for graphs, shift operators and their spectral structure
"""
import hashlib
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from .exceptions import DimensionMismatchError, InvalidParameterError, SupportViolationError

logger = logging.getLogger(__name__)

# Signals are plain numpy vectors of length n over the field of the shift operator
GraphSignal = np.ndarray


@dataclass
class Graph:
    """Weighted graph on the vertices 0..n-1"""
    n: int
    edges: List[Tuple[int, int, float]] = field(default_factory=list)
    directed: bool = False
    coordinates: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        """Validate vertex indices and normalize the edge list"""
        if self.n <= 0:
            raise InvalidParameterError(f"Graph needs at least one vertex, got n={self.n}")

        normalized = []
        seen = set()
        for edge in self.edges:
            i, j = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if i == j:
                raise InvalidParameterError(f"Self-loop on vertex {i} is not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidParameterError(f"Edge ({i}, {j}) out of range for n={self.n}")
            key = (i, j) if self.directed else (min(i, j), max(i, j))
            if key in seen:
                raise InvalidParameterError(f"Duplicate edge ({i}, {j})")
            seen.add(key)
            normalized.append((i, j, w))
        self.edges = normalized

        if self.coordinates is not None:
            self.coordinates = np.asarray(self.coordinates, dtype=float)
            if self.coordinates.shape != (self.n, 2):
                raise DimensionMismatchError(
                    f"Coordinates must have shape ({self.n}, 2), got {self.coordinates.shape}"
                )

    @property
    def num_edges(self) -> int:
        """Edge count M (each undirected edge counted once)"""
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense weighted adjacency W; symmetric for undirected graphs"""
        W = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            W[i, j] = w
            if not self.directed:
                W[j, i] = w
        return W

    def degrees(self) -> np.ndarray:
        """Weighted (out-)degrees, the row sums of W"""
        return self.adjacency().sum(axis=1)

    def neighbor_lists(self) -> List[Tuple[int, ...]]:
        """
        Sorted one-hop neighborhoods

        Direction is ignored: two vertices are neighbors when an edge joins
        them either way, since exchanges run over bidirectional links.

        Returns:
            List whose entry i holds the ascending neighbor ids of vertex i
        """
        sets = [set() for _ in range(self.n)]
        for i, j, _ in self.edges:
            sets[i].add(j)
            sets[j].add(i)
        return [tuple(sorted(s)) for s in sets]

    def to_networkx(self) -> nx.Graph:
        """Convert to a networkx graph with the same vertex ids and weights"""
        g = nx.DiGraph() if self.directed else nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_weighted_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        """Connectivity (weak connectivity for directed graphs)"""
        g = self.to_networkx()
        if self.directed:
            return nx.is_weakly_connected(g)
        return nx.is_connected(g)


class ShiftKind(str, Enum):
    """Algebraic representatives of a graph"""
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"
    NORMALIZED_LAPLACIAN = "normalized-laplacian"
    CUSTOM = "custom"


@dataclass
class ShiftOperator:
    """Graph shift operator S with its kind and scalar field"""
    matrix: np.ndarray
    kind: ShiftKind = ShiftKind.CUSTOM
    field: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise DimensionMismatchError(f"Shift operator must be square, got {self.matrix.shape}")
        self.kind = ShiftKind(self.kind)
        if not self.field:
            self.field = "complex" if np.iscomplexobj(self.matrix) else "real"
        if self.field not in ("real", "complex"):
            raise InvalidParameterError(f"Unknown scalar field: {self.field}")
        if self.field == "complex":
            self.matrix = self.matrix.astype(complex)
        else:
            self.matrix = self.matrix.astype(float)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_hermitian(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.conj().T))


@dataclass
class SpectralDecomposition:
    """S = U diag(lambda) U^-1 with eigenvalues in canonical ascending order"""
    eigvecs: np.ndarray
    eigvals: np.ndarray
    inv_eigvecs: np.ndarray

    @property
    def n(self) -> int:
        return self.eigvals.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.eigvecs * self.eigvals) @ self.inv_eigvecs


@dataclass
class SupportPattern:
    """
    Zero pattern of S + I

    The boolean mask marks the allowed entries of every coefficient matrix;
    its complement is the zero set. The diagonal is always allowed.
    """
    mask: np.ndarray

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.ndim != 2 or self.mask.shape[0] != self.mask.shape[1]:
            raise DimensionMismatchError(f"Support mask must be square, got {self.mask.shape}")
        if not np.all(np.diag(self.mask)):
            raise SupportViolationError("Diagonal entries must belong to the allowed support")

    @property
    def n(self) -> int:
        return self.mask.shape[0]

    @property
    def zero_indices(self) -> np.ndarray:
        """(row, col) pairs of the zero set, row-major order"""
        return np.argwhere(~self.mask)

    @property
    def allowed_indices(self) -> np.ndarray:
        """(row, col) pairs of the allowed support, row-major order"""
        return np.argwhere(self.mask)

    @property
    def num_allowed(self) -> int:
        return int(self.mask.sum())

    def leakage(self, matrix: np.ndarray) -> float:
        """Largest magnitude of a matrix on the zero set"""
        outside = np.abs(np.asarray(matrix)[~self.mask])
        return float(outside.max()) if outside.size else 0.0

    def check(self, matrix: np.ndarray, name: str = "matrix"):
        """Reject a coefficient matrix with entries outside the support"""
        matrix = np.asarray(matrix)
        if matrix.shape != self.mask.shape:
            raise DimensionMismatchError(f"{name} has shape {matrix.shape}, expected {self.mask.shape}")
        if self.leakage(matrix) != 0.0:
            logger.error(f"{name} has nonzero entries outside supp(S + I)")
            raise SupportViolationError(f"{name} has nonzero entries outside supp(S + I)")


@dataclass
class NullspaceBasis:
    """Orthonormal basis B of admissible eigenvalue vectors"""
    basis: np.ndarray
    dim: int
    singular_values: np.ndarray
    tolerance: float
    rank_tol: float = 1e-9

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document with row-major basis entries"""
        data = {
            "n": self.n,
            "dim": self.dim,
            "tolerance": float(self.tolerance),
            "rank_tol": float(self.rank_tol),
            "singular_values": [float(s) for s in self.singular_values],
            "basis_re": np.real(self.basis).ravel().tolist(),
        }
        if np.iscomplexobj(self.basis):
            data["basis_im"] = np.imag(self.basis).ravel().tolist()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NullspaceBasis":
        n, dim = int(data["n"]), int(data["dim"])
        basis = np.array(data["basis_re"], dtype=float).reshape(n, dim)
        if "basis_im" in data:
            basis = basis + 1j * np.array(data["basis_im"], dtype=float).reshape(n, dim)
        return cls(
            basis=basis,
            dim=dim,
            singular_values=np.array(data.get("singular_values", []), dtype=float),
            tolerance=float(data["tolerance"]),
            rank_tol=float(data.get("rank_tol", 1e-9)),
        )


@dataclass
class ModalResponse:
    """Per-mode gains h_i aligned with the decomposition order"""
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def as_graph_signal(values, n: int) -> GraphSignal:
    """
    Validate a signal against the vertex count

    Args:
        values: Array-like of node values
        n: Expected length

    Returns:
        One-dimensional numpy array
    """
    x = np.asarray(values)
    if x.ndim != 1 or x.shape[0] != n:
        logger.error(f"Signal of shape {x.shape} does not match n={n}")
        raise DimensionMismatchError(f"Signal of shape {x.shape} does not match n={n}")
    return x


def calculate_file_hash(file_path: str) -> str:
    """Calculate SHA256 hash of a file for provenance records"""
    sha256_hash = hashlib.sha256()
    try:
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(4096), b""):
                sha256_hash.update(byte_block)
        return sha256_hash.hexdigest()
    except OSError as e:
        logger.warning(f"Failed to hash {file_path}: {type(e).__name__}")
        return ""
