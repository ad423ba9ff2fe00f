"""
Experiment drivers

Each driver builds its graph and target from an ExperimentConfig, sweeps the
requested filter families over the configured orders and returns a
ResultTable. Every random draw derives from cfg.seed.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
from tqdm import tqdm

from ..analytics import GraphStatistics
from ..design import (
    DesignTarget,
    design_cev_ls,
    design_classical_matrix_ls,
    design_ev_arma1,
    design_nv_ls,
    design_sicev_ls,
    design_siev_bcd,
    nse,
)
from ..distsim import simulate_filter
from ..exceptions import ConfigError, InvalidParameterError
from ..filters import SIEV, BaseFilter, ClassicalARMA1, measure_convergence_rate
from ..generators import make_graph, random_knn_graph
from ..models import Graph, ShiftKind, ShiftOperator
from ..nullspace import ShiftInvariantSpace
from ..parsers import EdgeListParser, SignalParser
from ..shift import build_shift, eigendecompose, normalize_spectral
from .config import ExperimentConfig, ResultTable
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

logger = logging.getLogger(__name__)

OPERATOR_FAMILIES = ("classical", "nv", "cev")
SHIFT_INVARIANT_FAMILIES = ("siev", "sicev")
BEAM_EVAL_STEP_DEG = 1.0


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def _graph(cfg: ExperimentConfig, graph: Optional[Graph]) -> Graph:
    if graph is not None:
        return graph
    if cfg.graph_file:
        return EdgeListParser(cfg.graph_file).parse()
    return make_graph(cfg.generator, cfg.n, seed=cfg.seed, clusters=cfg.clusters, p_in=cfg.p_in,
                      p_out=cfg.p_out, k=cfg.k_neighbors, side=cfg.side)


def _shift(cfg: ExperimentConfig, graph: Graph, field: Optional[str] = None,
           normalize: Optional[bool] = None) -> ShiftOperator:
    S = build_shift(graph, cfg.shift_kind, field=field or cfg.scalar_field)
    if cfg.normalize if normalize is None else normalize:
        S = normalize_spectral(S)
    return S


def _table(cfg: ExperimentConfig, graph: Graph, S: ShiftOperator, **extra) -> ResultTable:
    metadata = {
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "graph": GraphStatistics.generate_summary_report(graph, S),
    }
    metadata.update(extra)
    return ResultTable(name=cfg.name, metadata=metadata)


def _families(cfg: ExperimentConfig, default: Tuple[str, ...], allowed: Tuple[str, ...]) -> List[str]:
    families = list(cfg.families or default)
    unknown = [f for f in families if f not in allowed]
    if unknown:
        logger.error(f"Experiment '{cfg.name}' does not support families {unknown}")
        raise ConfigError(f"Experiment '{cfg.name}' supports {list(allowed)}, got {unknown}")
    return families


def _fit_operator(family: str, S: ShiftOperator, target: np.ndarray, K: int) -> BaseFilter:
    """Least-squares fit of a non-shift-invariant family to an n x n target"""
    if family == "classical":
        return design_classical_matrix_ls(S, target, K)
    if family == "nv":
        return design_nv_ls(S, target, K)
    if family == "cev":
        return design_cev_ls(S, target, K).fitted
    raise InvalidParameterError(f"No operator-domain design for family '{family}'")


def _distsim_gap(graph: Graph, S: ShiftOperator, f: BaseFilter, rng: np.random.Generator,
                 cfg: ExperimentConfig) -> float:
    """Relative gap between the message-passing run and dense evaluation"""
    x = rng.standard_normal(graph.n)
    if S.field == "complex":
        x = x + 1j * rng.standard_normal(graph.n)
    y_sim, trace = simulate_filter(graph, S, f, x, max_rounds=cfg.max_iter, tol=cfg.tol)
    y_dense = f.dense(S) @ x
    scale = max(float(np.linalg.norm(y_dense)), np.finfo(float).tiny)
    if trace.violations:
        logger.error(f"{f.family}: {len(trace.violations)} locality violations")
    return float(np.linalg.norm(y_sim - y_dense)) / scale


def _record(table: ResultTable, family: str, K: int, target: np.ndarray, f: BaseFilter,
            S: ShiftOperator, graph: Graph, cfg: ExperimentConfig, rng: np.random.Generator):
    table.add(family, K, "nse", nse(target, f.dense(S)))
    if cfg.verify_distributed:
        table.add(family, K, "distsim_gap", _distsim_gap(graph, S, f, rng, cfg))


def _siev_sweep(table: ResultTable, space: ShiftInvariantSpace, modal: np.ndarray, target: np.ndarray,
                S: ShiftOperator, graph: Graph, cfg: ExperimentConfig, rng: np.random.Generator):
    """SIEV over the order list, each order warm-started from the previous fit"""
    previous: Optional[SIEV] = None
    for K in cfg.orders:
        if previous is None:
            report = design_siev_bcd(space, modal, K, init="classical", sweeps=cfg.bcd_sweeps,
                                     seed=cfg.seed, starts=cfg.bcd_starts)
        else:
            pad = np.zeros((K - previous.order, space.dim), dtype=previous.alphas.dtype)
            given = (np.vstack([previous.alphas, pad]), previous.alpha0)
            report = design_siev_bcd(space, modal, K, init="given", given=given, sweeps=cfg.bcd_sweeps,
                                     seed=cfg.seed, starts=cfg.bcd_starts)
        previous = report.fitted
        _record(table, "siev", K, target, previous, S, graph, cfg, rng)


def _sweep(table: ResultTable, families: List[str], target: np.ndarray, S: ShiftOperator, graph: Graph,
           cfg: ExperimentConfig, progress: bool, modal: Optional[np.ndarray] = None,
           space: Optional[ShiftInvariantSpace] = None):
    rng = np.random.default_rng(cfg.seed + 1)
    for family in tqdm(families, desc=cfg.name, disable=not progress):
        if family == "siev":
            _siev_sweep(table, space, modal, target, S, graph, cfg, rng)
        elif family == "sicev":
            for K in cfg.orders:
                _record(table, family, K, target, design_sicev_ls(space, modal, K), S, graph, cfg, rng)
        else:
            for K in cfg.orders:
                _record(table, family, K, target, _fit_operator(family, S, target, K), S, graph, cfg, rng)
        logger.debug(f"{cfg.name}: finished {family}")


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def exp_response_approx(cfg: ExperimentConfig, graph: Optional[Graph] = None,
                        progress: bool = False) -> ResultTable:
    """
    Approximate a modal response (exponential kernel or ideal low-pass)

    Args:
        cfg: Experiment configuration (target, gamma, mu, lambda_c, orders)
        graph: Optional graph overriding the configured generator
        progress: Show a progress bar

    Returns:
        ResultTable with one NSE row per (family, K)
    """
    graph = _graph(cfg, graph)
    S = _shift(cfg, graph)
    dec = eigendecompose(S)
    if cfg.target == "exponential":
        h = target_exponential_kernel(dec.eigvals, cfg.gamma, cfg.mu)
    elif cfg.target == "lowpass":
        h = target_ideal_lowpass(dec.eigvals, cfg.lambda_c)
    else:
        raise ConfigError(f"Unknown response target '{cfg.target}'")
    H = modal_target(dec, h)

    families = _families(cfg, ("classical", "nv", "cev", "siev"), OPERATOR_FAMILIES + SHIFT_INVARIANT_FAMILIES)
    space = ShiftInvariantSpace.from_shift(S) if set(families) & set(SHIFT_INVARIANT_FAMILIES) else None
    table = _table(cfg, graph, S, target=cfg.target)
    _sweep(table, families, H, S, graph, cfg, progress, modal=h, space=space)
    logger.info(f"Response experiment finished: {len(table.rows)} rows")
    return table


def exp_consensus(cfg: ExperimentConfig, graph: Optional[Graph] = None, progress: bool = False) -> ResultTable:
    """Fit the averaging operator (1/n) 1 1^T"""
    if ShiftKind(cfg.shift_kind) != ShiftKind.LAPLACIAN:
        logger.error("Consensus experiment requested with a non-Laplacian shift")
        raise ConfigError("The consensus experiment needs the laplacian shift kind")
    graph = _graph(cfg, graph)
    S = _shift(cfg, graph)
    A = consensus_target(graph.n)

    families = _families(cfg, ("classical", "nv", "cev", "siev", "sicev"),
                         OPERATOR_FAMILIES + SHIFT_INVARIANT_FAMILIES)
    space = None
    modal = None
    if set(families) & set(SHIFT_INVARIANT_FAMILIES):
        space = ShiftInvariantSpace.from_shift(S)
        modal = np.real_if_close(DesignTarget(matrix=A, decomposition=space.decomposition).as_modal(), tol=1000)
    table = _table(cfg, graph, S)
    _sweep(table, families, A, S, graph, cfg, progress, modal=modal, space=space)
    logger.info(f"Consensus experiment finished: {len(table.rows)} rows")
    return table


def exp_wiener(cfg: ExperimentConfig, graph: Optional[Graph] = None, sigma_x: Optional[np.ndarray] = None,
               sigma_n: Optional[np.ndarray] = None, progress: bool = False) -> ResultTable:
    """
    Fit the Wiener denoiser Sigma_x (Sigma_x + Sigma_n)^-1

    Sigma_x comes from the argument, from a per-node observation CSV
    (cfg.signal_file) or from the synthetic low-rank-plus-diagonal model.
    Sigma_n defaults to noise_var * I.
    """
    graph = _graph(cfg, graph)
    S = _shift(cfg, graph)
    source = "given"
    if sigma_x is None and cfg.signal_file:
        parser = SignalParser(cfg.signal_file)
        sigma_x = sample_covariance(parser.parse_observations())
        source = f"sample:{parser.file_hash}"
    elif sigma_x is None:
        sigma_x = synthetic_covariance(graph.n, cfg.signal_rank, cfg.seed)
        source = "synthetic"
    if sigma_n is None:
        sigma_n = cfg.noise_var * np.eye(graph.n)
    H = wiener_target(sigma_x, sigma_n)

    families = _families(cfg, OPERATOR_FAMILIES, OPERATOR_FAMILIES)
    table = _table(cfg, graph, S, covariance=source)
    _sweep(table, families, H, S, graph, cfg, progress)
    baseline = diagonal_projection(eigendecompose(S), H)
    table.add("diagonal_projection", 0, "nse", nse(H, baseline))
    logger.info(f"Wiener experiment finished: {len(table.rows)} rows")
    return table


def exp_beamforming(cfg: ExperimentConfig, graph: Optional[Graph] = None,
                    progress: bool = False) -> Tuple[ResultTable, Dict[float, pd.DataFrame]]:
    """
    Fit the conjugate-transposed matched-filter beamformer over a sensor array

    The array is a k-NN graph over random positions in a square of side
    cfg.side (in wavelengths); the look directions are the n-point grid in
    (-180, 180]. Beampatterns are in dB relative to the desired main lobe.

    Returns:
        (ResultTable, {steering angle: DataFrame(angle_deg, desired_db, <family>_db...)})
    """
    if graph is None:
        graph = random_knn_graph(cfg.n, cfg.k_neighbors, cfg.side, cfg.seed)
    if graph.coordinates is None:
        raise ConfigError("Beamforming needs node coordinates")
    S = _shift(cfg, graph, field="complex")
    n = graph.n
    points = graph.coordinates

    angles = angle_grid(n)
    W = matched_filter(steering_matrix(points, angles, cfg.wavelength))
    target = W.conj().T
    K = cfg.beam_order

    families = _families(cfg, ("cev", "nv"), ("classical", "nv", "cev"))
    table = _table(cfg, graph, S, beam_order=K)
    rng = np.random.default_rng(cfg.seed + 1)
    fitted = {}
    for family in tqdm(families, desc=cfg.name, disable=not progress):
        f = _fit_operator(family, S, target, K)
        _record(table, family, K, target, f, S, graph, cfg, rng)
        fitted[family] = f.dense(S)

    eval_angles = np.arange(-180.0 + BEAM_EVAL_STEP_DEG, 180.0 + BEAM_EVAL_STEP_DEG / 2, BEAM_EVAL_STEP_DEG)
    look_vectors = steering_matrix(points, eval_angles, cfg.wavelength)
    patterns = {}
    for theta0 in cfg.steering_angles:
        q0 = int(np.argmin(np.abs((angles - theta0 + 180.0) % 360.0 - 180.0)))
        desired = target[q0] @ look_vectors
        peak = float(np.abs(desired).max())
        look = int(np.argmin(np.abs((eval_angles - angles[q0] + 180.0) % 360.0 - 180.0)))
        frame = {"angle_deg": eval_angles, "desired_db": to_db(desired, peak)}
        for family, H in fitted.items():
            frame[f"{family}_db"] = to_db(H[q0] @ look_vectors, peak)
            table.add(family, K, f"mainlobe_db@{theta0:g}", frame[f"{family}_db"][look])
        patterns[float(theta0)] = pd.DataFrame(frame)

    logger.info(f"Beamforming experiment finished: {len(table.rows)} rows, {len(patterns)} beampatterns")
    return table, patterns


def exp_distributed_ls(cfg: ExperimentConfig, graph: Optional[Graph] = None, A: Optional[np.ndarray] = None,
                       x_true: Optional[np.ndarray] = None, progress: bool = False) -> ResultTable:
    """
    Recover x_ls = A^+ y at every node with one graph filter per unknown

    Filter i fits the rank-one target 1 a_i^T (a_i the i-th row of A^+), so
    every node outputs entry i of x_ls. For each order K the mean fit NSE is
    recorded; for the largest order the per-iteration error of the order-k
    truncations and the final floor are recorded too.

    Args:
        cfg: Experiment configuration
        graph: Optional graph
        A: System matrix (default: random n x n from the seed)
        x_true: Solution (default: random from the seed)
        progress: Show a progress bar

    Returns:
        ResultTable with nse, error and floor rows
    """
    graph = _graph(cfg, graph)
    S = _shift(cfg, graph)
    n = graph.n
    rng = np.random.default_rng(cfg.seed)
    if A is None:
        A = rng.standard_normal((n, n))
    if x_true is None:
        x_true = rng.standard_normal(n)
    A = np.asarray(A, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    y = A @ x_true
    pinv = np.linalg.pinv(A)
    ones = np.ones(n)
    x_norm = float(np.linalg.norm(x_true) ** 2)

    families = _families(cfg, ("nv", "cev"), ("nv", "cev"))
    table = _table(cfg, graph, S)
    sim_rng = np.random.default_rng(cfg.seed + 1)
    K_max = max(cfg.orders)
    for family in tqdm(families, desc=cfg.name, disable=not progress):
        for K in cfg.orders:
            fits = []
            errors = []
            for i in range(n):
                target = np.outer(ones, pinv[i])
                f = _fit_operator(family, S, target, K)
                fits.append(f)
                errors.append(nse(target, f.dense(S)))
            table.add(family, K, "nse", float(np.mean(errors)))
            if cfg.verify_distributed:
                table.add(family, K, "distsim_gap", _distsim_gap(graph, S, fits[0], sim_rng, cfg))
            if K != K_max:
                continue

            error = 1.0
            for k in range(1, K + 1):
                # column i holds every node's estimate of x_i
                X = np.column_stack([f.truncated(k).apply(S, y) for f in fits])
                error = float(np.sum(np.abs(X - x_true[None, :]) ** 2)) / (n * x_norm)
                table.add(family, k, "error", error)
            table.add(family, K, "floor", error)
    logger.info(f"Distributed LS experiment finished: {len(table.rows)} rows")
    return table


def _trajectory_rows(table: ResultTable, family: str, trajectory: List[np.ndarray], x_star: np.ndarray):
    energy = float(np.linalg.norm(x_star) ** 2)
    for t, y in enumerate(trajectory):
        table.add(family, t, "nse", float(np.linalg.norm(y - x_star) ** 2) / energy)


def exp_tikhonov(cfg: ExperimentConfig, graph: Optional[Graph] = None, z: Optional[np.ndarray] = None,
                 progress: bool = False) -> ResultTable:
    """
    Tikhonov denoising x* = (I + mu S)^-1 z by ARMA(1) and FIR recursions

    S is scaled to unit spectral norm. The classical ARMA(1) runs with
    psi = -mu and phi = 1, the EV ARMA(1) designs use every delta in
    cfg.deltas, and the CEV filter of order cfg.cev_order_tik reports its
    order-k truncations as iterations.

    Returns:
        ResultTable with per-iteration nse rows plus rate and design rows
    """
    graph = _graph(cfg, graph)
    S = _shift(cfg, graph, normalize=True)
    n = graph.n
    mu = cfg.mu_tik
    labels = ["classical_arma1"] + [f"evarma1_d{d:g}" for d in cfg.deltas] + ["cev"]
    table = _table(cfg, graph, S, mu=mu)

    if z is None:
        rng = np.random.default_rng(cfg.seed)
        dec = eigendecompose(S)
        rank = min(cfg.signal_rank, n)
        smooth = np.real(dec.eigvecs[:, :rank] @ rng.standard_normal(rank))
        z = smooth + np.sqrt(cfg.noise_var) * rng.standard_normal(n)
    z = np.asarray(z)

    if mu == 0.0:
        # x* = z; every recursion starts at the answer
        for label in labels:
            table.add(label, 0, "nse", 0.0)
        logger.info("Tikhonov experiment with mu = 0: nothing to iterate")
        return table

    H = scipy.linalg.solve(np.eye(n) + mu * S.matrix, np.eye(n))
    x_star = H @ z
    sim_rng = np.random.default_rng(cfg.seed + 1)

    classical = ClassicalARMA1(psi=-mu, phi=1.0)
    run = classical.run(S, z, tol=cfg.tol, max_iter=cfg.max_iter, keep_trajectory=True)
    _trajectory_rows(table, labels[0], run.trajectory, x_star)
    table.add(labels[0], run.iterations, "rate", measure_convergence_rate(run.trajectory, x_star))
    table.add(labels[0], run.iterations, "nse_design", nse(H, classical.dense(S)))

    for delta, label in tqdm(list(zip(cfg.deltas, labels[1:-1])), desc=cfg.name, disable=not progress):
        report = design_ev_arma1(S, H, delta)
        f = report.fitted
        run = f.run(S, z, tol=cfg.tol, max_iter=cfg.max_iter, keep_trajectory=True)
        _trajectory_rows(table, label, run.trajectory, x_star)
        table.add(label, run.iterations, "rate", measure_convergence_rate(run.trajectory, f.dense(S) @ z))
        table.add(label, run.iterations, "nse_design", report.nse)
        table.add(label, run.iterations, "spectral_norm", report.feasibility["spectral_norm"])
        if cfg.verify_distributed:
            table.add(label, run.iterations, "distsim_gap", _distsim_gap(graph, S, f, sim_rng, cfg))

    report = design_cev_ls(S, H, cfg.cev_order_tik)
    cev = report.fitted
    energy = float(np.linalg.norm(x_star) ** 2)
    for k in range(1, cev.order + 1):
        y = cev.truncated(k).apply(S, z)
        table.add("cev", k, "nse", float(np.linalg.norm(y - x_star) ** 2) / energy)
    table.add("cev", cev.order, "nse_design", report.nse)

    logger.info(f"Tikhonov experiment finished: {len(table.rows)} rows")
    return table


def run_experiment(cfg: ExperimentConfig, progress: bool = False) -> Tuple[ResultTable, Dict[float, pd.DataFrame]]:
    """
    Validate a configuration and run the named experiment

    Returns:
        (ResultTable, beampatterns); beampatterns are empty except for beamforming
    """
    cfg.validate()
    logger.info(f"Running experiment '{cfg.name}' (n={cfg.n}, seed={cfg.seed})")
    if cfg.name == "beamforming":
        return exp_beamforming(cfg, progress=progress)
    drivers = {
        "response": exp_response_approx,
        "consensus": exp_consensus,
        "wiener": exp_wiener,
        "distls": exp_distributed_ls,
        "tikhonov": exp_tikhonov,
    }
    return drivers[cfg.name](cfg, progress=progress), {}
