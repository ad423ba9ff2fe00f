"""
JSON documents for filter specifications

Matrices are stored as supported-entry triplets (i, j, value); complex values
are [re, im] pairs. Shift-invariant families embed their nullspace basis and
are rebuilt against a ShiftInvariantSpace of the same shift operator.
"""
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..exceptions import ConfigError, DimensionMismatchError
from ..models import NullspaceBasis, SupportPattern
from ..nullspace import ShiftInvariantSpace
from .arma_filters import ClassicalARMA1, EVArma1
from .base_filter import BaseFilter
from .fir_filters import ClassicalFIR, ConstrainedEV, EdgeVariantFIR, NodeVariantFIR
from .shift_invariant import SICEV, SIEV, SIEVA1

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _encode_value(v):
    v = complex(v)
    if v.imag == 0.0:
        return float(v.real)
    return [float(v.real), float(v.imag)]


def _decode_value(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return float(v)


def _encode_vector(vec) -> List:
    return [_encode_value(v) for v in np.asarray(vec).ravel()]


def _decode_vector(values) -> np.ndarray:
    decoded = [_decode_value(v) for v in values]
    if any(isinstance(v, complex) for v in decoded):
        return np.array(decoded, dtype=complex)
    return np.array(decoded, dtype=float)


def _encode_matrix(M) -> List[List]:
    M = np.asarray(M)
    return [[int(i), int(j), _encode_value(M[i, j])] for i, j in np.argwhere(M != 0)]


def _decode_matrix(triplets, n: int) -> np.ndarray:
    entries = [(int(i), int(j), _decode_value(v)) for i, j, v in triplets]
    dtype = complex if any(isinstance(v, complex) for _, _, v in entries) else float
    M = np.zeros((n, n), dtype=dtype)
    for i, j, v in entries:
        if not (0 <= i < n and 0 <= j < n):
            raise DimensionMismatchError(f"Triplet ({i}, {j}) out of range for n={n}")
        M[i, j] = v
    return M


def _field_of(*arrays) -> str:
    return "complex" if any(np.iscomplexobj(a) for a in arrays) else "real"


def filter_to_dict(f: BaseFilter) -> Dict[str, Any]:
    """
    Serialize a filter specification

    Args:
        f: Any filter family

    Returns:
        JSON-ready dictionary
    """
    doc: Dict[str, Any] = {"version": FORMAT_VERSION, "family": f.family, "order": f.order, "n": f.n}

    if isinstance(f, ClassicalFIR):
        doc.update(field=_field_of(f.taps), taps=_encode_vector(f.taps))
    elif isinstance(f, NodeVariantFIR):
        doc.update(field=_field_of(f.taps), taps=[_encode_vector(t) for t in f.taps])
    elif isinstance(f, (EdgeVariantFIR, ConstrainedEV)):
        doc.update(field=_field_of(f.mats), mats=[_encode_matrix(m) for m in f.mats])
    elif isinstance(f, ClassicalARMA1):
        doc.update(field=_field_of(f.psi, f.phi), psi=_encode_value(f.psi), phi=_encode_value(f.phi))
    elif isinstance(f, EVArma1):
        doc.update(field=_field_of(f.phi0, f.phi1), phi0=_encode_matrix(f.phi0), phi1=_encode_matrix(f.phi1))
    elif isinstance(f, SIEV):
        doc.update(field=_field_of(f.alphas), alphas=[_encode_vector(a) for a in f.alphas],
                   alpha0=None if f.alpha0 is None else _encode_vector(f.alpha0),
                   basis=f.space.basis.to_dict())
    elif isinstance(f, SICEV):
        doc.update(field=_field_of(f.alphas), alphas=[_encode_vector(a) for a in f.alphas],
                   basis=f.space.basis.to_dict())
    elif isinstance(f, SIEVA1):
        doc.update(field=_field_of(f.alpha0, f.alpha1), alpha0=_encode_vector(f.alpha0),
                   alpha1=_encode_vector(f.alpha1), basis=f.space.basis.to_dict())
    else:
        raise ConfigError(f"Cannot serialize filter of type {type(f).__name__}")
    return doc


def _space_with_basis(space: Optional[ShiftInvariantSpace], data: Dict[str, Any]) -> ShiftInvariantSpace:
    if space is None:
        raise ConfigError(f"Family {data['family']} needs the shift-invariant space of its shift operator")
    if "basis" not in data:
        return space
    basis = NullspaceBasis.from_dict(data["basis"])
    if basis.n != space.n:
        raise DimensionMismatchError(f"Stored basis has n={basis.n}, shift operator has n={space.n}")
    return ShiftInvariantSpace(decomposition=space.decomposition, support=space.support,
                               basis=basis, real_field=space.real_field)


def filter_from_dict(data: Dict[str, Any], support: Optional[SupportPattern] = None,
                     space: Optional[ShiftInvariantSpace] = None) -> BaseFilter:
    """
    Rebuild a filter from its JSON document

    Args:
        data: Dictionary produced by filter_to_dict
        support: Support pattern for matrix-valued families
        space: Shift-invariant space for SIEV, SICEV and SIEVA1

    Returns:
        Filter instance
    """
    try:
        family = data["family"]
    except KeyError:
        raise ConfigError("Filter document has no family tag")
    if support is None and space is not None:
        support = space.support

    if family == "classical":
        return ClassicalFIR(taps=_decode_vector(data["taps"]))
    if family == "nv":
        return NodeVariantFIR(taps=np.array([_decode_vector(t) for t in data["taps"]]))
    if family in ("ev", "cev", "evarma1"):
        if support is None:
            raise ConfigError(f"Family {family} needs the support pattern of its shift operator")
        n = support.n
        if data.get("n") is not None and int(data["n"]) != n:
            raise DimensionMismatchError(f"Filter has n={data['n']}, shift operator has n={n}")
        if family == "evarma1":
            return EVArma1(phi0=_decode_matrix(data["phi0"], n), phi1=_decode_matrix(data["phi1"], n),
                           support=support)
        mats = np.array([_decode_matrix(m, n) for m in data["mats"]])
        cls = EdgeVariantFIR if family == "ev" else ConstrainedEV
        return cls(mats=mats, support=support)
    if family == "classical_arma1":
        return ClassicalARMA1(psi=_decode_value(data["psi"]), phi=_decode_value(data["phi"]))
    if family == "siev":
        alpha0 = data.get("alpha0")
        return SIEV(alphas=np.array([_decode_vector(a) for a in data["alphas"]]),
                    space=_space_with_basis(space, data),
                    alpha0=None if alpha0 is None else _decode_vector(alpha0))
    if family == "sicev":
        return SICEV(alphas=np.array([_decode_vector(a) for a in data["alphas"]]),
                     space=_space_with_basis(space, data))
    if family == "sieva1":
        return SIEVA1(alpha0=_decode_vector(data["alpha0"]), alpha1=_decode_vector(data["alpha1"]),
                      space=_space_with_basis(space, data))

    logger.error(f"Unknown filter family in document: {family}")
    raise ConfigError(f"Unknown filter family: {family}")
