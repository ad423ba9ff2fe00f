"""
Least-squares designs: classical, node-variant, constrained edge-variant and
shift-invariant constrained edge-variant FIR filters
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..exceptions import InvalidParameterError
from ..filters import SICEV, ClassicalFIR, ConstrainedEV, NodeVariantFIR
from ..models import ShiftOperator, SupportPattern
from ..nullspace import ShiftInvariantSpace
from ..shift import spectral_norm, support_pattern
from .metrics import DesignReport, DesignSystem, nse

logger = logging.getLogger(__name__)

LSTSQ_COND = 1e-10
ISTA_ITERATIONS = 500


def solve_least_squares(G: np.ndarray, rhs: np.ndarray, ridge: float = 0.0, equilibrate: bool = True,
                        cond: float = LSTSQ_COND) -> Tuple[np.ndarray, int]:
    """
    Minimum-norm least squares with optional ridge

    Columns are scaled to unit norm before the solve when equilibrate is set.
    With ridge = 0 a rank-deficient system returns the minimum-norm minimizer,
    the limit of the ridge solution as the weight vanishes.

    Args:
        G: Regression matrix
        rhs: Right-hand side
        ridge: Tikhonov weight on the (scaled) coefficients
        equilibrate: Scale columns to unit norm first
        cond: Relative singular-value cutoff

    Returns:
        (coefficients, numerical rank)
    """
    G = np.asarray(G)
    rhs = np.asarray(rhs)
    cols = G.shape[1]
    if cols == 0:
        return np.zeros(0, dtype=np.result_type(G, rhs)), 0

    scale = np.ones(cols)
    if equilibrate:
        scale = np.linalg.norm(G, axis=0)
        scale[scale == 0] = 1.0
    Gs = G / scale

    if ridge > 0:
        Gs = np.vstack([Gs, np.sqrt(ridge) * np.eye(cols)])
        rhs = np.concatenate([rhs, np.zeros(cols, dtype=rhs.dtype)])

    theta, _, rank, _ = scipy.linalg.lstsq(Gs, rhs, cond=cond)
    return theta / scale, int(rank)


def _soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    mag = np.abs(v)
    shrink = np.where(mag > t, 1.0 - t / np.maximum(mag, np.finfo(float).tiny), 0.0)
    return v * shrink


def ista(G: np.ndarray, rhs: np.ndarray, weight: float, theta0: np.ndarray,
         iterations: int = ISTA_ITERATIONS) -> np.ndarray:
    """
    Iterative soft-thresholding for 0.5 ||rhs - G theta||^2 + weight ||theta||_1

    Args:
        G: Regression matrix
        rhs: Right-hand side
        weight: l1 weight
        theta0: Starting point
        iterations: Fixed iteration budget

    Returns:
        Sparse coefficient vector
    """
    lipschitz = spectral_norm(G) ** 2
    if lipschitz == 0.0:
        return theta0
    step = 1.0 / lipschitz
    theta = theta0.copy()
    Gh = G.conj().T
    for _ in range(iterations):
        theta = _soft_threshold(theta - step * (Gh @ (G @ theta - rhs)), step * weight)
    return theta


def fit_rows(powers: Sequence[np.ndarray], masks: Sequence[np.ndarray], target: np.ndarray,
             ridge: float = 0.0, sparsify: Optional[float] = None) -> List[np.ndarray]:
    """
    Fit target ~ sum_k C_k P_k with each C_k supported on masks[k]

    Row i of the fit only involves row i of every C_k, so the Frobenius
    problem splits into one small regression per row.

    Args:
        powers: Right factors P_k
        masks: Allowed support of each coefficient matrix
        target: Desired n x n operator
        ridge: Ridge weight (0 for minimum-norm)
        sparsify: Optional l1 weight

    Returns:
        Coefficient matrices C_k
    """
    n = target.shape[0]
    dtype = np.result_type(target, *powers)
    coeffs = [np.zeros((n, n), dtype=dtype) for _ in powers]
    deficient = 0

    for i in range(n):
        blocks = []
        layout = []
        for k, (P, mask) in enumerate(zip(powers, masks)):
            allowed = np.flatnonzero(mask[i])
            blocks.append(P[allowed, :].T)
            layout.append((k, allowed))
        G = np.hstack(blocks)
        theta, rank = solve_least_squares(G, target[i, :], ridge=ridge)
        if sparsify:
            theta = ista(G, target[i, :], sparsify, theta)
        if rank < G.shape[1]:
            deficient += 1

        offset = 0
        for k, allowed in layout:
            coeffs[k][i, allowed] = theta[offset:offset + allowed.size]
            offset += allowed.size

    if deficient:
        logger.debug(f"{deficient} of {n} row regressions were rank deficient (minimum-norm solution)")
    return coeffs


def _matrix_powers(S: ShiftOperator, count: int) -> List[np.ndarray]:
    powers = [np.eye(S.n, dtype=S.matrix.dtype)]
    for _ in range(count - 1):
        powers.append(S.matrix @ powers[-1])
    return powers


def design_classical_ls(eigvals: np.ndarray, target: np.ndarray, K: int, ridge: float = 0.0) -> ClassicalFIR:
    """
    Classical FIR taps by Vandermonde least squares on the modal response

    Args:
        eigvals: Eigenvalues of S
        target: Desired modal response
        K: Polynomial order

    Returns:
        ClassicalFIR with K + 1 taps
    """
    if K < 0:
        raise InvalidParameterError(f"Order must be nonnegative, got {K}")
    lam = np.asarray(eigvals)
    V = lam[:, None] ** np.arange(K + 1)[None, :]
    taps, rank = solve_least_squares(V, np.asarray(target), ridge=ridge)
    if rank < K + 1:
        logger.debug(f"Vandermonde system rank {rank} < {K + 1}")
    return ClassicalFIR(taps=taps)


def design_classical_matrix_ls(S: ShiftOperator, target: np.ndarray, K: int, ridge: float = 0.0) -> ClassicalFIR:
    """Classical FIR taps minimizing ||target - sum_k phi_k S^k||_F"""
    if K < 0:
        raise InvalidParameterError(f"Order must be nonnegative, got {K}")
    powers = _matrix_powers(S, K + 1)
    G = np.stack([P.ravel() for P in powers], axis=1)
    taps, _ = solve_least_squares(G, np.asarray(target).ravel(), ridge=ridge)
    return ClassicalFIR(taps=taps)


def cev_regression_system(S: ShiftOperator, target: np.ndarray, K: int,
                          support: Optional[SupportPattern] = None) -> DesignSystem:
    """
    Full CEV regression over vec(target) in row-major order

    Column (k, a, b) holds vec(E_ab S^(k-1)), whose row a is row b of S^(k-1).
    Meant for small n; the designs use the row-separable form.

    Returns:
        DesignSystem with n^2 rows and K * nnz(S + I) columns
    """
    supp = support or support_pattern(S)
    n = S.n
    allowed = supp.allowed_indices
    powers = _matrix_powers(S, K)
    Psi = np.zeros((n * n, K * allowed.shape[0]), dtype=np.result_type(S.matrix, target))
    column_map = []
    col = 0
    for k, P in enumerate(powers, start=1):
        for a, b in allowed:
            Psi[a * n:(a + 1) * n, col] = P[b, :]
            column_map.append((k, int(a), int(b)))
            col += 1
    return DesignSystem(regression_matrix=Psi, rhs=np.asarray(target).ravel(), column_map=column_map)


def design_cev_ls(S: ShiftOperator, target: np.ndarray, K: int, ridge: float = 0.0,
                  sparsify: Optional[float] = None, support: Optional[SupportPattern] = None) -> DesignReport:
    """
    Constrained EV FIR by least squares

    Args:
        S: Shift operator
        target: Desired n x n operator
        K: Number of coefficient matrices Phi_1..Phi_K
        ridge: Ridge weight, 0 selects the minimum-norm solution
        sparsify: Optional l1 weight solved by iterative soft-thresholding
        support: Allowed support (defaults to supp(S + I))

    Returns:
        DesignReport holding a ConstrainedEV
    """
    if K < 1:
        raise InvalidParameterError(f"CEV order must be >= 1, got {K}")
    supp = support or support_pattern(S)
    mats = fit_rows(_matrix_powers(S, K), [supp.mask] * K, np.asarray(target), ridge, sparsify)
    fitted = ConstrainedEV(mats=np.stack(mats), support=supp)
    H = fitted.dense(S)
    error = nse(target, H)
    logger.info(f"CEV LS design K={K}: NSE={error:.6e}")
    details = {"nonzeros": int(sum(np.count_nonzero(m) for m in mats))}
    return DesignReport(fitted=fitted, nse=error, iterations=1,
                        objective_trace=[float(np.linalg.norm(target - H) ** 2)], details=details)


def design_nv_ls(S: ShiftOperator, target: np.ndarray, K: int, ridge: float = 0.0) -> NodeVariantFIR:
    """
    Node-variant FIR taps phi_0..phi_K by least squares

    The same row-separable machinery as the CEV design with every coefficient
    matrix restricted to its diagonal.
    """
    if K < 0:
        raise InvalidParameterError(f"Order must be nonnegative, got {K}")
    diag_mask = np.eye(S.n, dtype=bool)
    mats = fit_rows(_matrix_powers(S, K + 1), [diag_mask] * (K + 1), np.asarray(target), ridge)
    fitted = NodeVariantFIR(taps=np.stack([np.diag(m) for m in mats]))
    logger.info(f"NV LS design K={K}: NSE={nse(target, fitted.dense(S)):.6e}")
    return fitted


def design_sicev_ls(space: ShiftInvariantSpace, target: np.ndarray, K: int, ridge: float = 0.0) -> SICEV:
    """
    SICEV coefficients from min ||h - [diag(lambda^0) B, ..., diag(lambda^(K-1)) B] alpha||

    Args:
        space: Shift-invariant space (basis B and eigenvalues)
        target: Desired modal response
        K: Number of coefficient vectors

    Returns:
        SICEV
    """
    if K < 1:
        raise InvalidParameterError(f"SICEV order must be >= 1, got {K}")
    B = space.basis.basis
    lam = space.eigvals
    d = space.dim
    M = np.hstack([(lam ** k)[:, None] * B for k in range(K)])
    alpha, rank = solve_least_squares(M, np.asarray(target), ridge=ridge)
    if rank < d * K:
        logger.warning(f"SICEV regression is rank deficient ({rank} < {d * K}); using the minimum-norm solution")
    return SICEV(alphas=alpha.reshape(K, d), space=space)
