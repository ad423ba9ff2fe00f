"""
Base class for graph filters and the shared ARMA iteration
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..exceptions import DimensionMismatchError, DivergentFilterError, UnsupportedKindError
from ..models import ShiftOperator

logger = logging.getLogger(__name__)

DEFAULT_ARMA_TOL = 1e-10
DEFAULT_ARMA_MAX_ITER = 10_000
DIVERGENCE_PATIENCE = 10


def frozen_array(values, ndim: Optional[int] = None) -> np.ndarray:
    """Read-only copy of an array-like"""
    arr = np.array(values)
    if not np.issubdtype(arr.dtype, np.number):
        arr = arr.astype(float)
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatchError(f"Expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def check_shift(S: ShiftOperator, n: int):
    """Reject a shift operator of the wrong size"""
    if S.n != n:
        logger.error(f"Shift operator n={S.n} does not match filter n={n}")
        raise DimensionMismatchError(f"Shift operator n={S.n} does not match filter n={n}")


class BaseFilter(ABC):
    """Base class for all filter families"""

    family: str = ""

    @property
    @abstractmethod
    def order(self) -> int:
        """Number of neighbor exchanges (recursion steps) of the filter"""
        pass

    @property
    @abstractmethod
    def n(self) -> Optional[int]:
        """Vertex count the coefficients are tied to, None for scalar-tap families"""
        pass

    @abstractmethod
    def dense(self, S: ShiftOperator) -> np.ndarray:
        """Dense n x n matrix realized by the filter on S"""
        pass

    @abstractmethod
    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        """Evaluate the filter through its local recursion"""
        pass

    def modal(self, eigvals: np.ndarray, basis: Optional[np.ndarray] = None) -> np.ndarray:
        """Per-mode response; only shift-invariant families define it"""
        raise UnsupportedKindError(f"{self.family} filters have no modal response")

    @property
    def is_arma(self) -> bool:
        return False

    def _check(self, S: ShiftOperator):
        if self.n is not None:
            check_shift(S, self.n)


@dataclass
class ArmaRun:
    """Outcome of an ARMA recursion"""
    output: np.ndarray
    iterations: int
    converged: bool
    trajectory: List[np.ndarray] = field(default_factory=list)


def arma_iterate(phi1: np.ndarray, drive: np.ndarray, tol: float = DEFAULT_ARMA_TOL,
                 max_iter: int = DEFAULT_ARMA_MAX_ITER, keep_trajectory: bool = False) -> ArmaRun:
    """
    Run y_t = phi1 y_{t-1} + drive from y_0 = 0

    Stops when ||y_t - y_{t-1}|| <= tol ||y_t||. Divergence is declared when
    the update norm grows for DIVERGENCE_PATIENCE consecutive iterations.

    Args:
        phi1: Feedback matrix
        drive: Constant input term (Phi_0 x)
        tol: Relative stopping tolerance
        max_iter: Iteration cap
        keep_trajectory: Store every iterate including y_0

    Returns:
        ArmaRun
    """
    y = np.zeros_like(drive, dtype=np.result_type(phi1, drive))
    trajectory = [y.copy()] if keep_trajectory else []
    prev_delta = np.inf
    growth = 0

    for t in range(1, max_iter + 1):
        y_new = phi1 @ y + drive
        delta = float(np.linalg.norm(y_new - y))
        if not np.isfinite(delta):
            logger.error(f"ARMA recursion produced non-finite values at iteration {t}")
            raise DivergentFilterError("ARMA recursion produced non-finite values")

        growth = growth + 1 if delta > prev_delta else 0
        if growth >= DIVERGENCE_PATIENCE:
            logger.error(f"ARMA update norm grew for {growth} consecutive iterations")
            raise DivergentFilterError(f"ARMA recursion diverges (update norm {delta:.3e})")

        y = y_new
        prev_delta = delta
        if keep_trajectory:
            trajectory.append(y.copy())
        if delta <= tol * np.linalg.norm(y):
            logger.debug(f"ARMA recursion converged after {t} iterations")
            return ArmaRun(output=y, iterations=t, converged=True, trajectory=trajectory)

    logger.warning(f"ARMA recursion hit the {max_iter}-iteration cap without converging")
    return ArmaRun(output=y, iterations=max_iter, converged=False, trajectory=trajectory)


def measure_convergence_rate(trajectory: List[np.ndarray], y_inf: np.ndarray,
                             floor: float = 1e-8) -> float:
    """
    Observed contraction factor e_{t+1} / e_t of an iteration

    The ratio is taken at the last step whose error is still above
    floor * e_0, where e_t = ||y_t - y_inf||.

    Args:
        trajectory: Iterates y_0, y_1, ...
        y_inf: Fixed point
        floor: Relative error level below which steps are ignored

    Returns:
        Measured factor, 0.0 when no valid step exists
    """
    errors = np.array([np.linalg.norm(y - y_inf) for y in trajectory])
    if errors.size < 2 or errors[0] == 0.0:
        return 0.0
    valid = np.flatnonzero(errors[:-1] >= floor * errors[0])
    if valid.size == 0:
        return 0.0
    t = valid[-1]
    if errors[t] == 0.0:
        return 0.0
    return float(errors[t + 1] / errors[t])
