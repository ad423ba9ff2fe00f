"""
Structural and spectral statistics for graphs and shift operators
"""
from typing import Dict, Optional, Tuple

import networkx as nx
import numpy as np

from .models import Graph, ShiftOperator
from .shift import eigendecompose, spectral_norm

DISTINCT_EIGENVALUE_TOL = 1e-8


class GraphStatistics:
    """Generate statistics from a graph and its shift operator"""

    @staticmethod
    def get_degree_range(graph: Graph) -> Tuple[float, float, float]:
        """
        Get degree statistics

        Returns:
            (minimum, mean, maximum) degree
        """
        degrees = graph.degrees()
        if degrees.size == 0:
            return 0.0, 0.0, 0.0
        return float(degrees.min()), float(degrees.mean()), float(degrees.max())

    @staticmethod
    def get_component_count(graph: Graph) -> int:
        """Number of (weakly) connected components"""
        G = graph.to_networkx()
        if graph.directed:
            return nx.number_weakly_connected_components(G)
        return nx.number_connected_components(G)

    @staticmethod
    def count_distinct_eigenvalues(S: ShiftOperator, tol: float = DISTINCT_EIGENVALUE_TOL) -> int:
        """
        Count distinct eigenvalues of a shift operator

        Eigenvalues closer than tol * max(1, |lambda|_max) are merged.
        """
        lam = eigendecompose(S).eigvals
        scale = tol * max(1.0, float(np.abs(lam).max()))
        distinct = []
        for value in lam:
            if all(abs(value - other) > scale for other in distinct):
                distinct.append(value)
        return len(distinct)

    @staticmethod
    def generate_summary_report(graph: Graph, S: Optional[ShiftOperator] = None) -> Dict:
        """
        Generate a summary of a graph

        Args:
            graph: Graph to summarize
            S: Optional shift operator for the spectral entries

        Returns:
            Dictionary with various statistics
        """
        d_min, d_mean, d_max = GraphStatistics.get_degree_range(graph)
        report = {
            'name': graph.name,
            'nodes': graph.n,
            'edges': graph.num_edges,
            'directed': graph.directed,
            'connected': graph.is_connected(),
            'components': GraphStatistics.get_component_count(graph),
            'degree_min': d_min,
            'degree_mean': d_mean,
            'degree_max': d_max,
        }
        if S is not None:
            report['shift_kind'] = S.kind.value
            report['spectral_norm'] = spectral_norm(S.matrix)
            report['distinct_eigenvalues'] = GraphStatistics.count_distinct_eigenvalues(S)
        return report
