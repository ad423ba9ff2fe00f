"""
Block-coordinate descent designs for the (non-convex) edge-variant and
shift-invariant edge-variant FIR filters
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidParameterError
from ..filters import SIEV, EdgeVariantFIR
from ..models import ShiftOperator, SupportPattern
from ..nullspace import ShiftInvariantSpace
from ..shift import support_pattern
from .least_squares import design_classical_ls, design_classical_matrix_ls, solve_least_squares
from .metrics import DesignReport, nse

logger = logging.getLogger(__name__)

DEFAULT_SWEEPS = 20
DEFAULT_TOL = 1e-9
DEFAULT_STARTS = 5
INIT_CHOICES = ("classical", "random", "given")


def _check_init(init: str, given):
    if init not in INIT_CHOICES:
        raise InvalidParameterError(f"Unknown initialization {init!r}, expected one of {INIT_CHOICES}")
    if init == "given" and given is None:
        raise InvalidParameterError("init='given' needs starting coefficients")


def _converged(previous: float, current: float, tol: float) -> bool:
    return previous - current <= tol * max(previous, np.finfo(float).tiny)


# ---------------------------------------------------------------------------
# Edge-variant FIR
# ---------------------------------------------------------------------------

def ev_objective(target: np.ndarray, mats: Sequence[np.ndarray]) -> float:
    """||target - sum_k Phi_k ... Phi_1||_F^2"""
    product = np.eye(target.shape[0])
    H = np.zeros_like(target, dtype=np.result_type(target, *mats))
    for phi in mats:
        product = phi @ product
        H = H + product
    return float(np.linalg.norm(target - H) ** 2)


def embed_classical_ev(taps: np.ndarray, S: ShiftOperator, K: int) -> List[np.ndarray]:
    """
    EV coefficient matrices reproducing sum_{k<K} c_k S^k

    Phi_1 = c_0 I and Phi_k = (c_{k-1} / c_{k-2}) S, so that the chained
    products telescope to c_{k-1} S^(k-1). A vanishing tap truncates the chain.
    """
    n = S.n
    dtype = np.result_type(taps, S.matrix)
    mats = [np.zeros((n, n), dtype=dtype) for _ in range(K)]
    mats[0] = taps[0] * np.eye(n, dtype=dtype)
    scale = np.abs(taps).max() if np.size(taps) else 0.0
    previous = taps[0]
    for k in range(1, K):
        current = taps[k] if k < len(taps) else 0.0
        if abs(previous) <= 1e-14 * max(scale, 1e-300):
            logger.warning(f"Classical embedding truncated at block {k + 1}: vanishing tap")
            break
        mats[k] = (current / previous) * S.matrix
        previous = current
    return mats


def design_ev_bcd(S: ShiftOperator, target: np.ndarray, K: int, init: str = "classical",
                  sweeps: int = DEFAULT_SWEEPS, tol: float = DEFAULT_TOL, seed: int = 0,
                  given: Optional[Sequence[np.ndarray]] = None,
                  support: Optional[SupportPattern] = None) -> DesignReport:
    """
    General EV FIR design by cyclic block-coordinate descent

    With all blocks but Phi_i fixed the filter is C + L Phi_i R, where
    C = sum_{k<i} Phi_{k:1}, L = sum_{k>=i} Phi_{k:i+1} and R = Phi_{i-1:1},
    so each step is a linear least squares in the supported entries of Phi_i.
    A step is only accepted when it does not increase the objective.

    Args:
        S: Shift operator
        target: Desired n x n operator
        K: Number of coefficient matrices
        init: classical, random or given
        sweeps: Sweep budget
        tol: Relative objective-change stopping tolerance
        seed: Seed for random initialization
        given: Starting matrices for init='given'
        support: Allowed support (defaults to supp(S + I))

    Returns:
        DesignReport holding an EdgeVariantFIR; objective_trace has one entry per sweep plus the start
    """
    if K < 1:
        raise InvalidParameterError(f"EV order must be >= 1, got {K}")
    _check_init(init, given)
    target = np.asarray(target)
    supp = support or support_pattern(S)
    n = S.n
    dtype = np.result_type(target, S.matrix)

    if init == "classical":
        taps = design_classical_matrix_ls(S, target, K - 1).taps
        mats = embed_classical_ev(taps, S, K)
    elif init == "random":
        rng = np.random.default_rng(seed)
        spread = 1.0 / np.sqrt(max(supp.num_allowed / n, 1.0))
        mats = [supp.mask * rng.standard_normal((n, n)) * spread for _ in range(K)]
    else:
        if len(given) != K:
            raise InvalidParameterError(f"Expected {K} starting matrices, got {len(given)}")
        mats = [np.array(m) for m in given]
        for k, m in enumerate(mats, start=1):
            supp.check(m, name=f"Phi_{k}")
    mats = [m.astype(np.result_type(dtype, m)) for m in mats]

    rows, cols = supp.allowed_indices[:, 0], supp.allowed_indices[:, 1]
    eye = np.eye(n, dtype=dtype)
    objective = ev_objective(target, mats)
    trace = [objective]
    sweeps_done = 0

    for sweep in range(sweeps):
        previous = objective
        for i in range(K):
            prefix = [eye]
            for phi in mats[:i]:
                prefix.append(phi @ prefix[-1])
            C = sum(prefix[1:], np.zeros_like(eye))
            R = prefix[-1]

            L = eye.copy()
            chain = eye
            for phi in mats[i + 1:]:
                chain = phi @ chain
                L = L + chain

            design = np.einsum("im,mj->ijm", L[:, rows], R[cols, :]).reshape(n * n, rows.size)
            theta, _ = solve_least_squares(design, (target - C).ravel())
            candidate = np.zeros((n, n), dtype=np.result_type(dtype, theta))
            candidate[rows, cols] = theta

            trial = mats[:i] + [candidate] + mats[i + 1:]
            trial_objective = ev_objective(target, trial)
            if trial_objective <= objective:
                mats = trial
                objective = trial_objective

        trace.append(objective)
        sweeps_done = sweep + 1
        logger.debug(f"EV BCD sweep {sweeps_done}: objective {objective:.6e}")
        if _converged(previous, objective, tol):
            break

    fitted = EdgeVariantFIR(mats=np.stack(mats), support=supp)
    error = nse(target, fitted.dense(S))
    logger.info(f"EV BCD design K={K}: NSE={error:.6e} after {sweeps_done} sweep(s)")
    return DesignReport(fitted=fitted, nse=error, iterations=sweeps_done, objective_trace=trace,
                        details={"init": init})


# ---------------------------------------------------------------------------
# Shift-invariant edge-variant FIR
# ---------------------------------------------------------------------------

def siev_response(B: np.ndarray, alphas: np.ndarray, alpha0: np.ndarray) -> np.ndarray:
    """h = B alpha_0 + sum_k prod_{j<=k} B alpha_j"""
    gains = B @ alphas.T
    return B @ alpha0 + np.cumprod(gains, axis=1).sum(axis=1)


def _siev_objective(target, B, alphas, alpha0) -> float:
    return float(np.linalg.norm(target - siev_response(B, alphas, alpha0)) ** 2)


def embed_classical_siev(space: ShiftInvariantSpace, taps: np.ndarray, K: int) -> np.ndarray:
    """
    Coefficients alpha_1 = B^H (c_0 1) and alpha_k = B^H ((c_{k-1} / c_{k-2}) lambda)

    Both the all-ones vector and lambda lie in span(B), so the projections
    are exact and the products telescope to c_{k-1} lambda^(k-1).
    """
    n, d = space.n, space.dim
    lam = space.eigvals
    alphas = np.zeros((K, d), dtype=np.result_type(taps, space.basis.basis, lam))
    alphas[0] = space.project(taps[0] * np.ones(n))
    scale = np.abs(taps).max() if np.size(taps) else 0.0
    previous = taps[0]
    for k in range(1, K):
        current = taps[k] if k < len(taps) else 0.0
        if abs(previous) <= 1e-14 * max(scale, 1e-300):
            logger.warning(f"Classical embedding truncated at block {k + 1}: vanishing tap")
            break
        alphas[k] = space.project((current / previous) * lam)
        previous = current
    return alphas


def _siev_descent(target, B, alphas, alpha0, sweeps, tol, use_alpha0) -> Tuple[np.ndarray, np.ndarray, List[float], int]:
    K = alphas.shape[0]
    objective = _siev_objective(target, B, alphas, alpha0)
    trace = [objective]
    sweeps_done = 0

    for sweep in range(sweeps):
        previous = objective

        if use_alpha0:
            rest = np.cumprod(B @ alphas.T, axis=1).sum(axis=1)
            candidate, _ = solve_least_squares(B, target - rest)
            trial_objective = _siev_objective(target, B, alphas, candidate)
            if trial_objective <= objective:
                alpha0, objective = candidate, trial_objective

        for m in range(K):
            gains = B @ alphas.T
            cum = np.cumprod(gains, axis=1)
            constant = B @ alpha0 + cum[:, :m].sum(axis=1)
            before = cum[:, m - 1] if m > 0 else np.ones(B.shape[0], dtype=gains.dtype)
            after = np.ones(B.shape[0], dtype=gains.dtype)
            running = np.ones(B.shape[0], dtype=gains.dtype)
            for j in range(m + 1, K):
                running = running * gains[:, j]
                after = after + running
            weight = before * after

            candidate, _ = solve_least_squares(weight[:, None] * B, target - constant)
            trial = alphas.copy().astype(np.result_type(alphas, candidate))
            trial[m] = candidate
            trial_objective = _siev_objective(target, B, trial, alpha0)
            if trial_objective <= objective:
                alphas, objective = trial, trial_objective

        trace.append(objective)
        sweeps_done = sweep + 1
        if _converged(previous, objective, tol):
            break

    return alphas, alpha0, trace, sweeps_done


def design_siev_bcd(space: ShiftInvariantSpace, target: np.ndarray, K: int, init: str = "classical",
                    sweeps: int = DEFAULT_SWEEPS, tol: float = DEFAULT_TOL, seed: int = 0,
                    starts: int = DEFAULT_STARTS, given: Optional[Tuple[np.ndarray, Optional[np.ndarray]]] = None,
                    use_alpha0: bool = True) -> DesignReport:
    """
    SIEV FIR design by block-coordinate descent over alpha_0, alpha_1..alpha_K

    Fixing every block but alpha_m, the modal response is c + w * (B alpha_m)
    with c collecting the terms of order below m and w the product of the
    earlier gains times one plus the tail products, a linear least squares.
    Start 0 uses init; the remaining starts draw random coefficients from
    the seed sequence (seed, s). The best final objective wins.

    Args:
        space: Shift-invariant space
        target: Desired modal response
        K: Number of coefficient vectors
        init: classical, random or given
        sweeps: Sweep budget per start
        tol: Relative objective-change stopping tolerance
        seed: Base random seed
        starts: Number of starts
        given: (alphas, alpha0) for init='given'
        use_alpha0: Fit the order-0 term

    Returns:
        DesignReport holding a SIEV; nse is the modal NSE
    """
    if K < 1:
        raise InvalidParameterError(f"SIEV order must be >= 1, got {K}")
    if starts < 1:
        raise InvalidParameterError(f"Need at least one start, got {starts}")
    _check_init(init, given)
    target = np.asarray(target)
    B = space.basis.basis
    n, d = space.n, space.dim
    spread = 0.5 * np.sqrt(n / d)

    best = None
    for s in range(starts):
        alpha0 = np.zeros(d, dtype=np.result_type(B, target))
        if s == 0 and init == "classical":
            taps = design_classical_ls(space.eigvals, target, K - 1).taps
            alphas = embed_classical_siev(space, taps, K)
        elif s == 0 and init == "given":
            alphas = np.array(given[0], dtype=np.result_type(B, target, np.asarray(given[0])))
            if alphas.shape != (K, d):
                raise InvalidParameterError(f"Starting alphas have shape {alphas.shape}, expected {(K, d)}")
            if given[1] is not None and use_alpha0:
                alpha0 = np.array(given[1], dtype=alpha0.dtype)
        else:
            rng = np.random.default_rng([seed, s])
            alphas = rng.standard_normal((K, d)) * spread / np.sqrt(d)

        result = _siev_descent(target, B, alphas, alpha0, sweeps, tol, use_alpha0)
        final = result[2][-1]
        logger.debug(f"SIEV BCD start {s}: objective {final:.6e}")
        if best is None or final < best[2][-1]:
            best = result

    alphas, alpha0, trace, sweeps_done = best
    fitted = SIEV(alphas=alphas, space=space, alpha0=alpha0 if use_alpha0 else None)
    energy = float(np.linalg.norm(target) ** 2)
    # a zero target has no normalized error; report the absolute objective
    error = trace[-1] / energy if energy > 0 else trace[-1]
    logger.info(f"SIEV BCD design K={K}: modal NSE={error:.6e}")
    return DesignReport(fitted=fitted, nse=error, iterations=sweeps_done, objective_trace=trace,
                        details={"init": init, "starts": starts})
