"""
Eigenvalue vectors compatible with the support of S + I

For a fixed eigenbasis U, the matrices U diag(w) U^-1 that vanish on the zero
set of S + I form a subspace; its coordinates w are the kernel of a linear
constraint matrix T with one row per zero entry.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, SupportViolationError
from .models import NullspaceBasis, ShiftOperator, SpectralDecomposition, SupportPattern
from .shift import eigendecompose, support_pattern

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL = 1e-9
LEAKAGE_TOL = 1e-8


def constraint_matrix(dec: SpectralDecomposition, supp: SupportPattern) -> np.ndarray:
    """
    Constraint matrix T of shape |zero set| x n

    Row r, for zero entry (i, j), is the elementwise product of row i of U and
    column j of U^-1, so (T w)_r is entry (i, j) of U diag(w) U^-1.

    Args:
        dec: Spectral decomposition of S
        supp: Support pattern of S + I

    Returns:
        T
    """
    if supp.n != dec.n:
        raise DimensionMismatchError(f"Support n={supp.n} does not match decomposition n={dec.n}")
    zeros = supp.zero_indices
    dtype = np.result_type(dec.eigvecs, dec.inv_eigvecs)
    if zeros.shape[0] == 0:
        return np.zeros((0, dec.n), dtype=dtype)
    zi, zj = zeros[:, 0], zeros[:, 1]
    return dec.eigvecs[zi, :] * dec.inv_eigvecs[:, zj].T


def nullspace_basis(T: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL, scale: float = 1.0) -> NullspaceBasis:
    """
    Orthonormal kernel basis of T via SVD

    A singular value counts toward the rank when it exceeds both
    rank_tol * sigma_max and the round-off floor max(p, n) * eps * scale, so a
    T that is zero up to rounding has full kernel.

    Args:
        T: Constraint matrix (p x n, p may be zero)
        rank_tol: Relative cutoff against the largest singular value
        scale: Magnitude of the entries of T before rounding, ||U|| ||U^-1|| for
            a constraint matrix built from the eigenbasis U

    Returns:
        NullspaceBasis with d = n - rank columns
    """
    T = np.asarray(T)
    p, n = T.shape
    if n == 0:
        raise DimensionMismatchError("Constraint matrix has no columns")

    if p == 0:
        return NullspaceBasis(
            basis=np.eye(n, dtype=T.dtype), dim=n, singular_values=np.zeros(0),
            tolerance=0.0, rank_tol=rank_tol,
        )

    # full Vh is only needed when T has fewer rows than columns
    _, s, Vh = scipy.linalg.svd(T, full_matrices=p < n)
    sigma_max = float(s[0]) if s.size else 0.0
    floor = max(p, n) * np.finfo(float).eps * scale
    tolerance = max(rank_tol * sigma_max, floor)
    rank = int(np.count_nonzero(s > tolerance))
    if rank >= n:
        # the all-ones vector is always admissible
        logger.warning(f"Constraint matrix reported full rank {rank}; keeping the weakest direction")
        rank = n - 1
        tolerance = float(s[-1])

    basis = Vh[rank:].conj().T
    logger.debug(f"Nullspace dimension {n - rank} (rank {rank}, sigma_max {sigma_max:.3e})")
    return NullspaceBasis(
        basis=basis, dim=n - rank, singular_values=s, tolerance=tolerance, rank_tol=rank_tol,
    )


def synthesize(dec: SpectralDecomposition, basis: NullspaceBasis, alpha: np.ndarray) -> np.ndarray:
    """A = U diag(B alpha) U^-1"""
    alpha = np.asarray(alpha)
    if alpha.shape != (basis.dim,):
        raise DimensionMismatchError(f"alpha has shape {alpha.shape}, expected ({basis.dim},)")
    if basis.n != dec.n:
        raise DimensionMismatchError(f"Basis n={basis.n} does not match decomposition n={dec.n}")
    omega = basis.basis @ alpha
    return (dec.eigvecs * omega) @ dec.inv_eigvecs


def realify(matrix: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Drop a negligible imaginary part"""
    matrix = np.asarray(matrix)
    if not np.iscomplexobj(matrix):
        return matrix
    scale = np.abs(matrix).max() if matrix.size else 0.0
    if np.abs(matrix.imag).max(initial=0.0) <= tol * max(scale, 1.0):
        return matrix.real.copy()
    return matrix


@dataclass(frozen=True)
class ShiftInvariantSpace:
    """
    Eigenbasis, support and nullspace basis of one shift operator

    Shift-invariant filter families carry this context to turn their basis
    coefficients alpha into coefficient matrices.
    """
    decomposition: SpectralDecomposition
    support: SupportPattern
    basis: NullspaceBasis
    real_field: bool = True

    @classmethod
    def from_shift(cls, S: ShiftOperator, rank_tol: float = DEFAULT_RANK_TOL) -> "ShiftInvariantSpace":
        dec = eigendecompose(S)
        supp = support_pattern(S)
        scale = float(np.linalg.norm(dec.eigvecs, 2) * np.linalg.norm(dec.inv_eigvecs, 2))
        basis = nullspace_basis(constraint_matrix(dec, supp), rank_tol, scale=scale)
        logger.info(f"Shift-invariant space n={S.n}, d={basis.dim}, zero set size {supp.zero_indices.shape[0]}")
        return cls(decomposition=dec, support=supp, basis=basis, real_field=S.field == "real")

    @property
    def n(self) -> int:
        return self.decomposition.n

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def eigvals(self) -> np.ndarray:
        return self.decomposition.eigvals

    def synthesize(self, alpha: np.ndarray) -> np.ndarray:
        """
        Supported coefficient matrix for alpha

        Entries on the zero set are numerically tiny; they are checked against
        the leakage tolerance and then set exactly to zero.

        Args:
            alpha: Basis coefficients of length d

        Returns:
            n x n matrix supported on S + I
        """
        A = synthesize(self.decomposition, self.basis, alpha)
        if self.real_field:
            A = realify(A)
        leak = self.support.leakage(A)
        scale = max(1.0, float(np.linalg.norm(alpha)))
        if leak > LEAKAGE_TOL * scale:
            logger.error(f"Synthesized matrix leaks {leak:.3e} outside the support")
            raise SupportViolationError(f"Synthesized matrix leaks {leak:.3e} outside the support")
        A = np.where(self.support.mask, A, 0)
        return A

    def project(self, omega: np.ndarray) -> np.ndarray:
        """Coefficients of the orthogonal projection of an eigenvalue vector onto span(B)"""
        return self.basis.basis.conj().T @ np.asarray(omega)
