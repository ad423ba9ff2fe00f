"""
First-order ARMA graph filters
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..exceptions import DivergentFilterError, SingularModeError
from ..models import ShiftOperator, SupportPattern, as_graph_signal
from ..shift import spectral_norm
from .base_filter import (
    DEFAULT_ARMA_MAX_ITER,
    DEFAULT_ARMA_TOL,
    ArmaRun,
    BaseFilter,
    arma_iterate,
    frozen_array,
)

logger = logging.getLogger(__name__)

SINGULAR_MODE_TOL = 1e-12


class _ArmaFilter(BaseFilter):
    """Common evaluation for y_t = Phi_1 y_{t-1} + Phi_0 x"""

    @property
    def is_arma(self) -> bool:
        return True

    @property
    def order(self) -> int:
        return 1

    def feedback(self, S: ShiftOperator) -> np.ndarray:
        raise NotImplementedError

    def feedforward(self, S: ShiftOperator) -> np.ndarray:
        raise NotImplementedError

    def dense(self, S: ShiftOperator) -> np.ndarray:
        """Steady-state operator (I - Phi_1)^-1 Phi_0"""
        self._check(S)
        phi1 = self.feedback(S)
        norm = spectral_norm(phi1)
        if norm >= 1.0:
            logger.error(f"Feedback spectral norm {norm:.6f} is not below 1")
            raise DivergentFilterError(f"ARMA feedback has spectral norm {norm:.6f} >= 1")
        return scipy.linalg.solve(np.eye(S.n) - phi1, self.feedforward(S))

    def run(self, S: ShiftOperator, x: np.ndarray, tol: float = DEFAULT_ARMA_TOL,
            max_iter: int = DEFAULT_ARMA_MAX_ITER, keep_trajectory: bool = False) -> ArmaRun:
        """Recursion from y_0 = 0 with its trajectory on request"""
        self._check(S)
        x = as_graph_signal(x, S.n)
        return arma_iterate(self.feedback(S), self.feedforward(S) @ x, tol=tol,
                            max_iter=max_iter, keep_trajectory=keep_trajectory)

    def apply(self, S: ShiftOperator, x: np.ndarray, tol: float = DEFAULT_ARMA_TOL,
              max_iter: int = DEFAULT_ARMA_MAX_ITER, **kwargs) -> np.ndarray:
        return self.run(S, x, tol=tol, max_iter=max_iter).output


@dataclass(frozen=True, eq=False)
class ClassicalARMA1(_ArmaFilter):
    """H = phi (I - psi S)^-1"""
    psi: complex
    phi: complex
    family = "classical_arma1"

    @property
    def n(self):
        return None

    def feedback(self, S: ShiftOperator) -> np.ndarray:
        return self.psi * S.matrix

    def feedforward(self, S: ShiftOperator) -> np.ndarray:
        return self.phi * np.eye(S.n)

    def modal(self, eigvals: np.ndarray, basis=None) -> np.ndarray:
        denom = 1.0 - self.psi * np.asarray(eigvals)
        if np.any(np.abs(denom) < SINGULAR_MODE_TOL):
            raise SingularModeError("1 - psi * lambda_i vanishes for some mode")
        return self.phi / denom


@dataclass(frozen=True, eq=False)
class EVArma1(_ArmaFilter):
    """H = (I - Phi_1)^-1 Phi_0 with Phi_0, Phi_1 supported on S + I"""
    phi0: np.ndarray
    phi1: np.ndarray
    support: SupportPattern
    family = "evarma1"

    def __post_init__(self):
        phi0 = frozen_array(self.phi0, ndim=2)
        phi1 = frozen_array(self.phi1, ndim=2)
        self.support.check(phi0, name="Phi_0")
        self.support.check(phi1, name="Phi_1")
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "phi1", phi1)

    @property
    def n(self) -> int:
        return self.phi0.shape[0]

    def feedback(self, S: ShiftOperator) -> np.ndarray:
        return self.phi1

    def feedforward(self, S: ShiftOperator) -> np.ndarray:
        return self.phi0
