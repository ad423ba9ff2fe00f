"""
Finite impulse response filter families: classical, node-variant,
edge-variant and constrained edge-variant
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionMismatchError, InvalidParameterError
from ..models import ShiftOperator, SupportPattern, as_graph_signal
from .base_filter import BaseFilter, frozen_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClassicalFIR(BaseFilter):
    """H = sum_k phi_k S^k with scalar taps phi_0..phi_K"""
    taps: np.ndarray
    family = "classical"

    def __post_init__(self):
        taps = frozen_array(np.atleast_1d(self.taps), ndim=1)
        if taps.size == 0:
            raise InvalidParameterError("Classical FIR needs at least one tap")
        object.__setattr__(self, "taps", taps)

    @property
    def order(self) -> int:
        return self.taps.size - 1

    @property
    def n(self):
        return None

    def dense(self, S: ShiftOperator) -> np.ndarray:
        eye = np.eye(S.n)
        H = self.taps[-1] * eye
        for phi in self.taps[-2::-1]:
            H = H @ S.matrix + phi * eye
        return H

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        shifted = as_graph_signal(x, S.n)
        y = self.taps[0] * shifted
        for phi in self.taps[1:]:
            shifted = S.matrix @ shifted
            y = y + phi * shifted
        return y

    def modal(self, eigvals: np.ndarray, basis=None) -> np.ndarray:
        return np.polyval(self.taps[::-1], np.asarray(eigvals))

    def truncated(self, k: int) -> "ClassicalFIR":
        return ClassicalFIR(taps=self.taps[:k + 1])


@dataclass(frozen=True, eq=False)
class NodeVariantFIR(BaseFilter):
    """H = sum_k diag(phi_k) S^k with per-node taps, stored as a (K+1) x n array"""
    taps: np.ndarray
    family = "nv"

    def __post_init__(self):
        taps = frozen_array(np.atleast_2d(self.taps), ndim=2)
        if taps.shape[0] == 0:
            raise InvalidParameterError("Node-variant FIR needs at least one tap vector")
        object.__setattr__(self, "taps", taps)

    @property
    def order(self) -> int:
        return self.taps.shape[0] - 1

    @property
    def n(self) -> int:
        return self.taps.shape[1]

    def dense(self, S: ShiftOperator) -> np.ndarray:
        self._check(S)
        power = np.eye(S.n, dtype=S.matrix.dtype)
        H = self.taps[0][:, None] * power
        for phi in self.taps[1:]:
            power = S.matrix @ power
            H = H + phi[:, None] * power
        return H

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        self._check(S)
        shifted = as_graph_signal(x, S.n)
        y = self.taps[0] * shifted
        for phi in self.taps[1:]:
            shifted = S.matrix @ shifted
            y = y + phi * shifted
        return y

    def truncated(self, k: int) -> "NodeVariantFIR":
        return NodeVariantFIR(taps=self.taps[:k + 1])


class _MatrixFIR(BaseFilter):
    """Shared checks for families with supported coefficient matrices"""

    def _freeze_mats(self):
        mats = frozen_array(self.mats)
        if mats.ndim == 2:
            mats = frozen_array(mats[None, :, :])
        if mats.ndim != 3 or mats.shape[0] == 0:
            raise InvalidParameterError(f"Expected a K x n x n stack with K >= 1, got {mats.shape}")
        if mats.shape[1:] != self.support.mask.shape:
            raise DimensionMismatchError(
                f"Coefficient matrices {mats.shape[1:]} do not match support {self.support.mask.shape}"
            )
        for k, phi in enumerate(mats, start=1):
            self.support.check(phi, name=f"Phi_{k}")
        object.__setattr__(self, "mats", mats)

    @property
    def order(self) -> int:
        return self.mats.shape[0]

    @property
    def n(self) -> int:
        return self.mats.shape[1]


@dataclass(frozen=True, eq=False)
class EdgeVariantFIR(_MatrixFIR):
    """H = sum_k Phi_k Phi_{k-1} ... Phi_1"""
    mats: np.ndarray
    support: SupportPattern
    family = "ev"

    def __post_init__(self):
        self._freeze_mats()

    def dense(self, S: ShiftOperator) -> np.ndarray:
        self._check(S)
        product = np.eye(self.n, dtype=self.mats.dtype)
        H = np.zeros_like(product)
        for phi in self.mats:
            product = phi @ product
            H = H + product
        return H

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        self._check(S)
        shifted = as_graph_signal(x, self.n)
        y = np.zeros(self.n, dtype=np.result_type(self.mats, shifted))
        for phi in self.mats:
            shifted = phi @ shifted
            y = y + shifted
        return y

    def truncated(self, k: int) -> "EdgeVariantFIR":
        return EdgeVariantFIR(mats=self.mats[:k], support=self.support)


@dataclass(frozen=True, eq=False)
class ConstrainedEV(_MatrixFIR):
    """H = sum_k Phi_k S^(k-1)"""
    mats: np.ndarray
    support: SupportPattern
    family = "cev"

    def __post_init__(self):
        self._freeze_mats()

    def dense(self, S: ShiftOperator) -> np.ndarray:
        self._check(S)
        power = np.eye(self.n, dtype=S.matrix.dtype)
        H = np.zeros((self.n, self.n), dtype=np.result_type(self.mats, S.matrix))
        for phi in self.mats:
            H = H + phi @ power
            power = S.matrix @ power
        return H

    def apply(self, S: ShiftOperator, x: np.ndarray, **kwargs) -> np.ndarray:
        self._check(S)
        shifted = as_graph_signal(x, self.n)
        y = np.zeros(self.n, dtype=np.result_type(self.mats, S.matrix, shifted))
        for phi in self.mats:
            y = y + phi @ shifted
            shifted = S.matrix @ shifted
        return y

    def truncated(self, k: int) -> "ConstrainedEV":
        return ConstrainedEV(mats=self.mats[:k], support=self.support)
