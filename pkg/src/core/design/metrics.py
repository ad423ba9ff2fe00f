"""
Error metrics and containers shared by the filter designs
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..exceptions import DimensionMismatchError, ZeroTargetError
from ..filters import BaseFilter, filter_to_dict
from ..models import SpectralDecomposition
from ..nullspace import realify

logger = logging.getLogger(__name__)


def nse(target: np.ndarray, H: np.ndarray) -> float:
    """
    Normalized squared error ||target - H||_F^2 / ||target||_F^2

    Args:
        target: Desired operator or response
        H: Realized operator or response

    Returns:
        Nonnegative error
    """
    target = np.asarray(target)
    H = np.asarray(H)
    if target.shape != H.shape:
        raise DimensionMismatchError(f"Target shape {target.shape} does not match {H.shape}")
    energy = float(np.linalg.norm(target) ** 2)
    if energy == 0.0:
        logger.error("Normalized error requested against a zero target")
        raise ZeroTargetError("Target has zero energy")
    return float(np.linalg.norm(target - H) ** 2) / energy


@dataclass
class DesignTarget:
    """Desired operator, given either as a matrix or as a modal response"""
    matrix: Optional[np.ndarray] = None
    modal: Optional[np.ndarray] = None
    decomposition: Optional[SpectralDecomposition] = None

    def __post_init__(self):
        if self.matrix is None and self.modal is None:
            raise DimensionMismatchError("A design target needs a matrix or a modal response")
        if self.modal is not None and self.decomposition is None:
            raise DimensionMismatchError("Modal targets need a spectral decomposition")
        for name in ("matrix", "modal"):
            value = getattr(self, name)
            if value is not None and not np.all(np.isfinite(value)):
                raise DimensionMismatchError(f"Target {name} has non-finite entries")

    @classmethod
    def from_modal(cls, dec: SpectralDecomposition, h: np.ndarray) -> "DesignTarget":
        return cls(modal=np.asarray(h), decomposition=dec)

    def as_matrix(self) -> np.ndarray:
        """H = U diag(h) U^-1 for modal targets"""
        if self.matrix is not None:
            return self.matrix
        dec = self.decomposition
        return realify((dec.eigvecs * self.modal) @ dec.inv_eigvecs)

    def as_modal(self) -> np.ndarray:
        """Diagonal of U^-1 H U for matrix targets"""
        if self.modal is not None:
            return self.modal
        if self.decomposition is None:
            raise DimensionMismatchError("Matrix targets need a decomposition for a modal view")
        dec = self.decomposition
        return np.diag(dec.inv_eigvecs @ self.matrix @ dec.eigvecs)


@dataclass
class DesignSystem:
    """Assembled regression min ||rhs - regression_matrix theta||"""
    regression_matrix: np.ndarray
    rhs: np.ndarray
    column_map: List[Tuple[int, int, int]] = field(default_factory=list)

    def residual(self, theta: np.ndarray) -> np.ndarray:
        return self.rhs - self.regression_matrix @ theta


@dataclass
class DesignReport:
    """Fitted filter with its error and solver diagnostics"""
    fitted: BaseFilter
    nse: float
    iterations: int = 1
    objective_trace: List[float] = field(default_factory=list)
    feasibility: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self, include_filter: bool = False) -> Dict[str, Any]:
        data = {
            "family": self.fitted.family,
            "order": self.fitted.order,
            "nse": float(self.nse),
            "iterations": int(self.iterations),
            "objective_trace": [float(v) for v in self.objective_trace],
            "feasibility": {k: float(v) for k, v in self.feasibility.items()},
            "details": self.details,
        }
        if include_filter:
            data["filter"] = filter_to_dict(self.fitted)
        return data
