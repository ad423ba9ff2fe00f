"""
Desk-scale experiment drivers and their result tables
"""
from .config import EXPERIMENTS, RESULT_COLUMNS, ExperimentConfig, ResultRow, ResultTable
from .scenarios import (
    exp_beamforming,
    exp_consensus,
    exp_distributed_ls,
    exp_response_approx,
    exp_tikhonov,
    exp_wiener,
    run_experiment,
)
from .targets import (
    angle_grid,
    consensus_target,
    diagonal_projection,
    matched_filter,
    modal_target,
    sample_covariance,
    steering_matrix,
    synthetic_covariance,
    target_exponential_kernel,
    target_ideal_lowpass,
    to_db,
    wiener_target,
)

__all__ = [
    "EXPERIMENTS",
    "RESULT_COLUMNS",
    "ExperimentConfig",
    "ResultRow",
    "ResultTable",
    "angle_grid",
    "consensus_target",
    "diagonal_projection",
    "exp_beamforming",
    "exp_consensus",
    "exp_distributed_ls",
    "exp_response_approx",
    "exp_tikhonov",
    "exp_wiener",
    "matched_filter",
    "modal_target",
    "run_experiment",
    "sample_covariance",
    "steering_matrix",
    "synthetic_covariance",
    "target_exponential_kernel",
    "target_ideal_lowpass",
    "to_db",
    "wiener_target",
]
