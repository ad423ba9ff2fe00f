"""
Filter design algorithms
"""
from .block_coordinate import design_ev_bcd, design_siev_bcd, embed_classical_ev, embed_classical_siev, ev_objective
from .least_squares import (
    cev_regression_system,
    design_classical_ls,
    design_classical_matrix_ls,
    design_cev_ls,
    design_nv_ls,
    design_sicev_ls,
    solve_least_squares,
)
from .metrics import DesignReport, DesignSystem, DesignTarget, nse
from .prony import design_ev_arma1, design_sieva1

__all__ = [
    "DesignReport",
    "DesignSystem",
    "DesignTarget",
    "cev_regression_system",
    "design_cev_ls",
    "design_classical_ls",
    "design_classical_matrix_ls",
    "design_ev_arma1",
    "design_ev_bcd",
    "design_nv_ls",
    "design_sicev_ls",
    "design_siev_bcd",
    "design_sieva1",
    "embed_classical_ev",
    "embed_classical_siev",
    "ev_objective",
    "nse",
    "solve_least_squares",
]
