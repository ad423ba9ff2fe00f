"""
Shift operator assembly, eigendecomposition and graph Fourier transforms
"""
import logging
from typing import Optional, Union

import numpy as np
import scipy.linalg

from .exceptions import (
    DefectiveOperatorError,
    DegenerateInputError,
    DimensionMismatchError,
    UnsupportedKindError,
)
from .models import (
    Graph,
    GraphSignal,
    ShiftKind,
    ShiftOperator,
    SpectralDecomposition,
    SupportPattern,
    as_graph_signal,
)

logger = logging.getLogger(__name__)

DEFECTIVE_TOL = 1e-6


def build_shift(graph: Graph, kind: Union[str, ShiftKind] = ShiftKind.LAPLACIAN,
                matrix: Optional[np.ndarray] = None, field: str = "real") -> ShiftOperator:
    """
    Build a shift operator for a graph

    Args:
        graph: Source graph
        kind: adjacency, laplacian, normalized-laplacian or custom
        matrix: Explicit operator for the custom kind
        field: "real" or "complex"

    Returns:
        ShiftOperator
    """
    try:
        kind = ShiftKind(kind)
    except ValueError:
        logger.error(f"Unknown shift kind: {kind}")
        raise UnsupportedKindError(f"Unknown shift kind: {kind}")

    W = graph.adjacency()

    if kind == ShiftKind.CUSTOM:
        if matrix is None:
            raise UnsupportedKindError("Custom shift kind requires an explicit matrix")
        S = np.asarray(matrix)
        if S.shape != (graph.n, graph.n):
            raise DimensionMismatchError(f"Custom shift has shape {S.shape}, graph has n={graph.n}")
    elif kind == ShiftKind.ADJACENCY:
        S = W
    else:
        if graph.directed:
            logger.error(f"{kind.value} requested on a directed graph")
            raise UnsupportedKindError(f"{kind.value} is only defined for undirected graphs")
        if np.any(W < 0):
            logger.error(f"{kind.value} requested on a graph with negative weights")
            raise UnsupportedKindError(f"{kind.value} requires nonnegative edge weights")

        degrees = W.sum(axis=1)
        L = np.diag(degrees) - W
        if kind == ShiftKind.LAPLACIAN:
            S = L
        else:
            inv_sqrt = np.zeros_like(degrees)
            positive = degrees > 0
            inv_sqrt[positive] = 1.0 / np.sqrt(degrees[positive])
            S = inv_sqrt[:, None] * L * inv_sqrt[None, :]
            S = 0.5 * (S + S.T)
            # isolated vertices keep an identity row
            isolated = np.flatnonzero(~positive)
            S[isolated, isolated] = 1.0

    if field == "complex":
        S = S.astype(complex)
    logger.debug(f"Built {kind.value} shift operator for n={graph.n}")
    return ShiftOperator(matrix=S, kind=kind, field=field)


def eigendecompose(S: ShiftOperator) -> SpectralDecomposition:
    """
    Diagonalize a shift operator

    Hermitian operators use eigh and return a unitary U with U^-1 = U^H;
    other operators use eig with an explicit inverse. Eigenvalues are sorted
    ascending by real part, ties broken by imaginary part.

    Args:
        S: Shift operator

    Returns:
        SpectralDecomposition
    """
    A = S.matrix

    if S.is_hermitian:
        w, U = scipy.linalg.eigh(A)
        Uinv = U.conj().T
    else:
        w, U = scipy.linalg.eig(A)
        if np.isrealobj(A) and not np.any(w.imag):
            w = w.real
            U = np.real(U)
        try:
            Uinv = scipy.linalg.inv(U)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            logger.error(f"Eigenvector matrix is singular: {e}")
            raise DefectiveOperatorError("Shift operator is not diagonalizable")

    order = np.lexsort((np.imag(w), np.real(w)))
    w = w[order]
    U = U[:, order]
    Uinv = Uinv[order, :]

    dec = SpectralDecomposition(eigvecs=U, eigvals=w, inv_eigvecs=Uinv)

    scale = np.abs(A).max() if A.size else 0.0
    with np.errstate(all="ignore"):
        residual = np.abs(dec.reconstruct() - A).max() if A.size else 0.0
        identity_gap = np.abs(U @ Uinv - np.eye(S.n)).max() if A.size else 0.0
    if not np.isfinite(residual) or not np.isfinite(identity_gap) \
            or residual > DEFECTIVE_TOL * scale or identity_gap > DEFECTIVE_TOL:
        logger.error(f"Reconstruction residual {residual:.3e} exceeds tolerance")
        raise DefectiveOperatorError(
            f"Shift operator is defective (residual {residual:.3e}, scale {scale:.3e})"
        )

    logger.debug(f"Eigendecomposition done, residual {residual:.3e}")
    return dec


def gft(dec: SpectralDecomposition, x: GraphSignal) -> GraphSignal:
    """Graph Fourier transform x_hat = U^-1 x"""
    x = as_graph_signal(x, dec.n)
    return dec.inv_eigvecs @ x


def igft(dec: SpectralDecomposition, x_hat: GraphSignal) -> GraphSignal:
    """Inverse graph Fourier transform x = U x_hat"""
    x_hat = as_graph_signal(x_hat, dec.n)
    return dec.eigvecs @ x_hat


def support_pattern(S: ShiftOperator) -> SupportPattern:
    """Allowed support supp(S + I) and its zero complement"""
    mask = S.matrix != 0
    np.fill_diagonal(mask, True)
    return SupportPattern(mask=mask)


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value"""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(M)[0])


def normalize_spectral(S: ShiftOperator) -> ShiftOperator:
    """
    Scale a shift operator to unit spectral norm

    Args:
        S: Shift operator

    Returns:
        ShiftOperator S / sigma_max with the same kind and field
    """
    sigma = spectral_norm(S.matrix)
    if sigma == 0.0:
        logger.error("Cannot normalize a zero shift operator")
        raise DegenerateInputError("Cannot normalize a zero shift operator")
    return ShiftOperator(matrix=S.matrix / sigma, kind=S.kind, field=S.field)
