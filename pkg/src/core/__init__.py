"""
Core functionality for EdgeFilterLab
"""
from .models import (
    Graph,
    ShiftKind,
    ShiftOperator,
    SpectralDecomposition,
    SupportPattern,
    NullspaceBasis,
    ModalResponse,
    as_graph_signal,
    calculate_file_hash
)
from .shift import build_shift, eigendecompose, normalize_spectral, support_pattern
from .nullspace import ShiftInvariantSpace
from .export import DataExporter
from .analytics import GraphStatistics

__all__ = [
    'Graph',
    'ShiftKind',
    'ShiftOperator',
    'SpectralDecomposition',
    'SupportPattern',
    'NullspaceBasis',
    'ModalResponse',
    'as_graph_signal',
    'calculate_file_hash',
    'build_shift',
    'eigendecompose',
    'normalize_spectral',
    'support_pattern',
    'ShiftInvariantSpace',
    'DataExporter',
    'GraphStatistics'
]
