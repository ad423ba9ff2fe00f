"""
Graph filter families and their evaluation
"""
import logging
from typing import Optional

import numpy as np

from ..exceptions import UnsupportedKindError
from ..models import ModalResponse, NullspaceBasis, ShiftOperator, as_graph_signal
from ..shift import spectral_norm
from .arma_filters import ClassicalARMA1, EVArma1
from .base_filter import (
    DEFAULT_ARMA_MAX_ITER,
    DEFAULT_ARMA_TOL,
    ArmaRun,
    BaseFilter,
    arma_iterate,
    measure_convergence_rate,
)
from .fir_filters import ClassicalFIR, ConstrainedEV, EdgeVariantFIR, NodeVariantFIR
from .serialization import filter_from_dict, filter_to_dict
from .shift_invariant import SICEV, SIEV, SIEVA1

logger = logging.getLogger(__name__)

FAMILIES = ("classical", "nv", "ev", "cev", "siev", "sicev", "classical_arma1", "evarma1", "sieva1")
MODAL_FAMILIES = (ClassicalFIR, ClassicalARMA1, SIEV, SICEV, SIEVA1)


def dense_matrix(f: BaseFilter, S: ShiftOperator) -> np.ndarray:
    """Dense matrix realized by a filter on S"""
    return f.dense(S)


def apply_recursive(f: BaseFilter, S: ShiftOperator, x: np.ndarray, tol: float = DEFAULT_ARMA_TOL,
                    max_iter: int = DEFAULT_ARMA_MAX_ITER) -> np.ndarray:
    """
    Evaluate a filter through its local recursion

    Args:
        f: Filter of any family
        S: Shift operator
        x: Input signal
        tol: Relative stopping tolerance (ARMA families)
        max_iter: Iteration cap (ARMA families)

    Returns:
        Output signal
    """
    x = as_graph_signal(x, S.n)
    return f.apply(S, x, tol=tol, max_iter=max_iter)


def modal_response(f: BaseFilter, basis: Optional[NullspaceBasis] = None,
                   eigvals: Optional[np.ndarray] = None) -> ModalResponse:
    """
    Per-mode response of a shift-invariant filter

    Args:
        f: Classical FIR/ARMA or a shift-invariant EV family
        basis: Nullspace basis (defaults to the filter's own)
        eigvals: Eigenvalues of S (required for the classical families)

    Returns:
        ModalResponse
    """
    if not isinstance(f, MODAL_FAMILIES):
        raise UnsupportedKindError(f"{f.family} filters are not shift invariant")
    B = None if basis is None else basis.basis
    if eigvals is None:
        if isinstance(f, (ClassicalFIR, ClassicalARMA1)):
            raise UnsupportedKindError("Classical families need the eigenvalues of S")
        eigvals = f.space.eigvals
    return ModalResponse(values=f.modal(np.asarray(eigvals), B))


__all__ = [
    "FAMILIES",
    "ArmaRun",
    "BaseFilter",
    "ClassicalARMA1",
    "ClassicalFIR",
    "ConstrainedEV",
    "EVArma1",
    "EdgeVariantFIR",
    "NodeVariantFIR",
    "SICEV",
    "SIEV",
    "SIEVA1",
    "apply_recursive",
    "arma_iterate",
    "dense_matrix",
    "filter_from_dict",
    "filter_to_dict",
    "measure_convergence_rate",
    "modal_response",
    "spectral_norm",
]
