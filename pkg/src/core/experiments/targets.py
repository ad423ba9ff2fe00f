"""
Target operators and responses used by the experiments
"""
import logging

import numpy as np
import scipy.linalg

from ..exceptions import DegenerateInputError, DimensionMismatchError, InvalidParameterError
from ..models import SpectralDecomposition
from ..nullspace import realify

logger = logging.getLogger(__name__)

SPECTRUM_EDGE_TOL = 1e-10
DB_FLOOR = 1e-12
SINGULAR_COND = 1e14


def _real_spectrum(lam: np.ndarray) -> np.ndarray:
    lam = np.real_if_close(np.asarray(lam), tol=1000)
    if np.iscomplexobj(lam):
        logger.error("Spectral target requested on a complex spectrum")
        raise InvalidParameterError("Spectral targets need real eigenvalues")
    return lam.astype(float)


def target_exponential_kernel(lam: np.ndarray, gamma: float, mu: float) -> np.ndarray:
    """h_i = exp(-gamma (lambda_i - mu)^2)"""
    lam = _real_spectrum(lam)
    return np.exp(-gamma * (lam - mu) ** 2)


def target_ideal_lowpass(lam: np.ndarray, lambda_c: float) -> np.ndarray:
    """
    Ideal low-pass response

    Eigenvalues within a relative rounding margin of 0 or lambda_c count as
    inside the pass band.

    Args:
        lam: Eigenvalues
        lambda_c: Cut-off frequency

    Returns:
        h_i = 1 for 0 <= lambda_i <= lambda_c, else 0
    """
    lam = _real_spectrum(lam)
    margin = SPECTRUM_EDGE_TOL * max(1.0, float(np.abs(lam).max(initial=0.0)))
    return ((lam >= -margin) & (lam <= lambda_c + margin)).astype(float)


def modal_target(dec: SpectralDecomposition, h: np.ndarray) -> np.ndarray:
    """U diag(h) U^-1"""
    h = np.asarray(h)
    if h.shape != (dec.n,):
        raise DimensionMismatchError(f"Response of shape {h.shape} does not match n={dec.n}")
    return realify((dec.eigvecs * h) @ dec.inv_eigvecs)


def diagonal_projection(dec: SpectralDecomposition, H: np.ndarray) -> np.ndarray:
    """U diag(diag(U^-1 H U)) U^-1, the closest operator sharing the eigenbasis of S"""
    D = dec.inv_eigvecs @ np.asarray(H) @ dec.eigvecs
    return modal_target(dec, np.diag(D))


def consensus_target(n: int) -> np.ndarray:
    return np.full((n, n), 1.0 / n)


def wiener_target(sigma_x: np.ndarray, sigma_n: np.ndarray) -> np.ndarray:
    """
    Wiener operator Sigma_x (Sigma_x + Sigma_n)^-1

    Args:
        sigma_x: Signal covariance (symmetric PSD)
        sigma_n: Noise covariance (symmetric PSD)

    Returns:
        n x n operator
    """
    sigma_x = np.asarray(sigma_x, dtype=float)
    sigma_n = np.asarray(sigma_n, dtype=float)
    if sigma_x.shape != sigma_n.shape or sigma_x.ndim != 2 or sigma_x.shape[0] != sigma_x.shape[1]:
        raise DimensionMismatchError(f"Covariances have shapes {sigma_x.shape} and {sigma_n.shape}")
    for name, C in (("signal", sigma_x), ("noise", sigma_n)):
        if not np.allclose(C, C.T, atol=1e-12 * max(1.0, np.abs(C).max())):
            raise DegenerateInputError(f"The {name} covariance is not symmetric")
    total = sigma_x + sigma_n
    cond = np.linalg.cond(total)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        logger.error("Covariance sum is singular")
        raise DegenerateInputError("Sigma_x + Sigma_n is singular")
    # the sum is symmetric, so solve the transposed system
    return scipy.linalg.solve(total, sigma_x, assume_a="sym").T


def synthetic_covariance(n: int, rank: int = 3, seed: int = 0) -> np.ndarray:
    """Low-rank plus diagonal covariance F F^T + diag(d), d ~ U[0.1, 1]"""
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((n, rank))
    return F @ F.T + np.diag(rng.uniform(0.1, 1.0, n))


def sample_covariance(observations: np.ndarray) -> np.ndarray:
    """
    Sample covariance from a T x n table of per-node observations

    Args:
        observations: One row per time instant, one column per node

    Returns:
        n x n covariance
    """
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 2 or obs.shape[0] < 2:
        raise DegenerateInputError(f"Need at least two observations, got shape {obs.shape}")
    return np.atleast_2d(np.cov(obs, rowvar=False))


def angle_grid(n: int) -> np.ndarray:
    """Uniform grid of n angles in (-180, 180] degrees"""
    return -180.0 + 360.0 * (np.arange(n) + 1) / n


def steering_matrix(points: np.ndarray, angles_deg: np.ndarray, wavelength: float = 1.0) -> np.ndarray:
    """
    Planar-array steering vectors

    Args:
        points: n x 2 sensor positions
        angles_deg: Look directions in degrees
        wavelength: Carrier wavelength (kappa = 2 pi / wavelength)

    Returns:
        n x len(angles) matrix, column q the steering vector of angle q
    """
    points = np.asarray(points, dtype=float)
    theta = np.deg2rad(np.asarray(angles_deg, dtype=float))
    kappa = 2.0 * np.pi / wavelength
    phase = kappa * (np.outer(points[:, 0], np.cos(theta)) + np.outer(points[:, 1], np.sin(theta)))
    return np.exp(1j * phase)


def matched_filter(A: np.ndarray) -> np.ndarray:
    """Column-normalized steering matrix"""
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise DegenerateInputError("Steering matrix has a zero column")
    return A / norms


def to_db(response: np.ndarray, peak: float) -> np.ndarray:
    """20 log10(|response| / peak) with a floor"""
    if peak <= 0:
        raise DegenerateInputError("Beampattern reference peak must be positive")
    return 20.0 * np.log10(np.maximum(np.abs(response), DB_FLOOR) / peak)
