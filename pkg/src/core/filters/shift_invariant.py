"""
Shift-invariant edge-variant families parametrized by nullspace coefficients

Each coefficient matrix is U diag(B alpha) U^-1, so every member commutes with
S and keeps the support of S + I.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidParameterError, SingularModeError
from ..models import ShiftOperator
from ..nullspace import ShiftInvariantSpace
from .arma_filters import SINGULAR_MODE_TOL, EVArma1, _ArmaFilter
from .base_filter import BaseFilter, frozen_array
from .fir_filters import ConstrainedEV, EdgeVariantFIR

logger = logging.getLogger(__name__)


def _frozen_alphas(alphas, dim: int) -> np.ndarray:
    arr = frozen_array(np.atleast_2d(alphas), ndim=2)
    if arr.shape[0] == 0:
        raise InvalidParameterError("At least one coefficient vector is required")
    if arr.shape[1] != dim:
        raise DimensionMismatchError(f"Coefficient vectors have length {arr.shape[1]}, basis has d={dim}")
    return arr


def _basis_matrix(space: ShiftInvariantSpace, basis: Optional[np.ndarray]) -> np.ndarray:
    return space.basis.basis if basis is None else np.asarray(basis)


@dataclass(frozen=True, eq=False)
class SIEV(BaseFilter):
    """Shift-invariant EV FIR: sum_k Phi_k ... Phi_1 plus an optional order-0 term"""
    alphas: np.ndarray
    space: ShiftInvariantSpace
    alpha0: Optional[np.ndarray] = None
    family = "siev"

    def __post_init__(self):
        object.__setattr__(self, "alphas", _frozen_alphas(self.alphas, self.space.dim))
        if self.alpha0 is not None:
            alpha0 = frozen_array(self.alpha0, ndim=1)
            if alpha0.shape[0] != self.space.dim:
                raise DimensionMismatchError(f"alpha0 has length {alpha0.shape[0]}, basis has d={self.space.dim}")
            object.__setattr__(self, "alpha0", alpha0)

    @property
    def order(self) -> int:
        return self.alphas.shape[0]

    @property
    def n(self) -> int:
        return self.space.n

    @cached_property
    def edge_variant(self) -> EdgeVariantFIR:
        """Equivalent EV filter with synthesized coefficient matrices"""
        mats = np.stack([self.space.synthesize(a) for a in self.alphas])
        return EdgeVariantFIR(mats=mats, support=self.space.support)

    @cached_property
    def direct_term(self) -> Optional[np.ndarray]:
        """Synthesized order-0 matrix, None without alpha0"""
        if self.alpha0 is None:
            return None
        return self.space.synthesize(self.alpha0)

    def dense(self, S: ShiftOperator) -> np.ndarray:
        H = self.edge_variant.dense(S)
        if self.direct_term is not None:
            H = H + self.direct_term
        return H

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        y = self.edge_variant.apply(S, x)
        if self.direct_term is not None:
            y = y + self.direct_term @ np.asarray(x)
        return y

    def modal(self, eigvals: np.ndarray = None, basis: Optional[np.ndarray] = None) -> np.ndarray:
        """h_i = sum_k prod_{j<=k} b_i^T alpha_j + b_i^T alpha_0"""
        B = _basis_matrix(self.space, basis)
        gains = B @ self.alphas.T
        h = np.cumprod(gains, axis=1).sum(axis=1)
        if self.alpha0 is not None:
            h = h + B @ self.alpha0
        return h


@dataclass(frozen=True, eq=False)
class SICEV(BaseFilter):
    """Shift-invariant constrained EV FIR: sum_k Phi_k S^(k-1)"""
    alphas: np.ndarray
    space: ShiftInvariantSpace
    family = "sicev"

    def __post_init__(self):
        object.__setattr__(self, "alphas", _frozen_alphas(self.alphas, self.space.dim))

    @property
    def order(self) -> int:
        return self.alphas.shape[0]

    @property
    def n(self) -> int:
        return self.space.n

    @cached_property
    def constrained(self) -> ConstrainedEV:
        """Equivalent CEV filter with synthesized coefficient matrices"""
        mats = np.stack([self.space.synthesize(a) for a in self.alphas])
        return ConstrainedEV(mats=mats, support=self.space.support)

    def dense(self, S: ShiftOperator) -> np.ndarray:
        return self.constrained.dense(S)

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        return self.constrained.apply(S, x)

    def modal(self, eigvals: np.ndarray = None, basis: Optional[np.ndarray] = None) -> np.ndarray:
        """h_i = sum_k (b_i^T alpha_k) lambda_i^(k-1)"""
        B = _basis_matrix(self.space, basis)
        lam = self.space.eigvals if eigvals is None else np.asarray(eigvals)
        gains = B @ self.alphas.T
        powers = lam[:, None] ** np.arange(self.order)[None, :]
        return (gains * powers).sum(axis=1)


@dataclass(frozen=True, eq=False)
class SIEVA1(_ArmaFilter):
    """Shift-invariant EV ARMA(1) with Phi_0, Phi_1 synthesized from alpha0, alpha1"""
    alpha0: np.ndarray
    alpha1: np.ndarray
    space: ShiftInvariantSpace
    family = "sieva1"

    def __post_init__(self):
        for name in ("alpha0", "alpha1"):
            arr = frozen_array(getattr(self, name), ndim=1)
            if arr.shape[0] != self.space.dim:
                raise DimensionMismatchError(f"{name} has length {arr.shape[0]}, basis has d={self.space.dim}")
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.space.n

    @cached_property
    def edge_variant(self) -> EVArma1:
        """Equivalent EV ARMA(1) filter"""
        return EVArma1(
            phi0=self.space.synthesize(self.alpha0),
            phi1=self.space.synthesize(self.alpha1),
            support=self.space.support,
        )

    def feedback(self, S: ShiftOperator) -> np.ndarray:
        return self.edge_variant.phi1

    def feedforward(self, S: ShiftOperator) -> np.ndarray:
        return self.edge_variant.phi0

    def modal(self, eigvals: np.ndarray = None, basis: Optional[np.ndarray] = None) -> np.ndarray:
        """h_i = b_i^T alpha_0 / (1 - b_i^T alpha_1)"""
        B = _basis_matrix(self.space, basis)
        denom = 1.0 - B @ self.alpha1
        if np.any(np.abs(denom) < SINGULAR_MODE_TOL):
            logger.error("Rational modal response has a vanishing denominator")
            raise SingularModeError("1 - b_i^T alpha_1 vanishes for some mode")
        return (B @ self.alpha0) / denom
