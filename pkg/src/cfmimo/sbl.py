"""Sparse-Bayesian decomposition of fully-digital precoders.

A fully-digital precoder matrix is approximated as (dictionary columns) x
(row-sparse baseband matrix). Row sparsity is induced by a per-row Gaussian
prior whose variances are fitted by expectation-maximization; the rows with
the largest fitted variances become the RF chains. The posterior statistics
are evaluated through the matrix-inversion identity

    Pi = Gamma - Gamma G^H (sigma_e^2 I + G Gamma G^H)^(-1) G Gamma,

which stays exact as hyperparameters shrink to zero, so no pruning or ridge
is needed and the EM evidence is monotone by construction.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, InvalidInputError

DEFAULT_K_MAX = 50
DEFAULT_EPSILON = 1e-6


@dataclass
class Dictionary:
    matrix: np.ndarray       # n_antennas x grid size, unit-norm steering columns
    angles: np.ndarray       # grid angles in [0, pi]


@dataclass
class SblState:
    gamma: np.ndarray        # fitted row-prior variances
    phi: np.ndarray          # posterior mean of the row-sparse factor
    pi: np.ndarray           # posterior covariance
    sigma_e_sq: float
    iterations: int
    gamma_history: List[np.ndarray] = field(default_factory=list)


@dataclass
class HybridFactorization:
    f_rf: np.ndarray         # block-diagonal RF factor, dictionary columns
    f_bb: np.ndarray         # baseband factor (sum of RF budgets x streams)
    support: List[np.ndarray]  # selected grid indices per AP block
    residual: float          # ||target - f_rf @ f_bb||_F


def build_dictionary(n_antennas: int, grid_size: int, spacing: float = 0.5) -> Dictionary:
    """Steering-vector dictionary on the uniform cosine grid
    cos(phi_s) = 2(s-1)/S - 1, s = 1..S, phi_s in [0, pi].

    Atom s has phase progression 2*pi*spacing*n*cos(phi_s): the cosine grid
    tiles the full [-1, 1) beamspace with distinct unit-modulus columns (a
    sine-argument response would fold phi and pi-phi onto the same atom).
    """
    if grid_size < 1:
        raise ConfigurationError("grid size must be >= 1")
    cosines = 2.0 * np.arange(grid_size) / grid_size - 1.0
    angles = np.arccos(cosines)
    n = np.arange(n_antennas)[:, None]
    matrix = np.exp(2j * np.pi * spacing * n * cosines[None, :]) / np.sqrt(n_antennas)
    return Dictionary(matrix=matrix, angles=angles)


def default_error_variance(f_target: np.ndarray) -> float:
    """1e-2 times the mean squared entry of the target matrix."""
    return 1e-2 * float(np.linalg.norm(f_target) ** 2) / f_target.size


def _posterior(g: np.ndarray, gamma: np.ndarray, f: np.ndarray, sigma_e_sq: float):
    """Posterior mean rows and covariance diagonal for the current gamma."""
    gg = g * gamma  # G Gamma, columns scaled
    sigma_y = sigma_e_sq * np.eye(g.shape[0], dtype=complex) + gg @ g.conj().T
    solve = np.linalg.solve
    phi = gamma[:, None] * (g.conj().T @ solve(sigma_y, f))
    q = np.real(np.sum(np.conj(g) * solve(sigma_y, g), axis=0))
    pi_diag = np.clip(gamma * (1.0 - gamma * q), 0.0, None)
    return phi, pi_diag, sigma_y


def em_sbl(
    f_target: np.ndarray,
    dictionary: Dictionary,
    sigma_e_sq: Optional[float] = None,
    k_max: int = DEFAULT_K_MAX,
    epsilon: float = DEFAULT_EPSILON,
) -> SblState:
    """Fit the row-prior variances by EM until ||gamma_k - gamma_{k-1}||^2 <= eps.

    All hyperparameters start at 1 and the first iteration always runs.
    """
    if k_max < 1:
        raise ConfigurationError("k_max must be >= 1")
    if epsilon <= 0:
        raise ConfigurationError("epsilon must be positive")
    f = np.atleast_2d(np.asarray(f_target, dtype=complex))
    g = dictionary.matrix
    if f.shape[0] != g.shape[0]:
        raise ConfigurationError(
            f"target has {f.shape[0]} rows but dictionary columns have {g.shape[0]}"
        )
    if sigma_e_sq is None:
        sigma_e_sq = default_error_variance(f)
    if sigma_e_sq <= 0:
        raise ConfigurationError("error variance must be positive")

    n_streams = f.shape[1]
    grid = g.shape[1]
    gamma = np.ones(grid)
    history = [gamma.copy()]
    phi = np.zeros((grid, n_streams), dtype=complex)
    iterations = 0
    for k in range(1, k_max + 1):
        phi, pi_diag, _ = _posterior(g, gamma, f, sigma_e_sq)
        if not np.all(np.isfinite(phi)):
            raise InvalidInputError(f"EM produced non-finite values at iteration {k}")
        gamma_new = pi_diag + np.sum(np.abs(phi) ** 2, axis=1) / n_streams
        history.append(gamma_new.copy())
        iterations = k
        delta = float(np.sum((gamma_new - gamma) ** 2))
        gamma = gamma_new
        if delta <= epsilon:
            break

    # full posterior covariance for the final hyperparameters
    gg = g * gamma
    sigma_y = sigma_e_sq * np.eye(g.shape[0], dtype=complex) + gg @ g.conj().T
    pi = np.diag(gamma).astype(complex) - gg.conj().T @ np.linalg.solve(sigma_y, gg)
    pi = 0.5 * (pi + pi.conj().T)
    return SblState(
        gamma=gamma, phi=phi, pi=pi, sigma_e_sq=float(sigma_e_sq),
        iterations=iterations, gamma_history=history,
    )


def select_support(gamma: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest hyperparameters, ties by lowest index."""
    if count > gamma.size:
        raise ConfigurationError(f"cannot select {count} rows from {gamma.size}")
    order = np.lexsort((np.arange(gamma.size), -gamma))
    return np.sort(order[:count])


def extract_hybrid(
    state: SblState, dictionary: Dictionary, n_rf_total: int,
    f_target: Optional[np.ndarray] = None,
) -> HybridFactorization:
    """Collapse the fitted posterior to an RF factor (dictionary columns on
    the selected support) and the matching baseband rows."""
    support = select_support(state.gamma, n_rf_total)
    f_rf = dictionary.matrix[:, support]
    f_bb = state.phi[support, :]
    residual = float("nan")
    if f_target is not None:
        residual = float(np.linalg.norm(np.atleast_2d(f_target) - f_rf @ f_bb))
    return HybridFactorization(
        f_rf=f_rf, f_bb=f_bb, support=[support], residual=residual,
    )


def decompose_precoder(
    f_opt: np.ndarray,
    n_aps: int,
    n_rf_per_ap: Sequence[int],
    dictionary: Dictionary,
    sigma_e_sq: Optional[float] = None,
    k_max: int = DEFAULT_K_MAX,
    epsilon: float = DEFAULT_EPSILON,
) -> HybridFactorization:
    """Decompose a stacked fully-digital precoder AP by AP.

    The RF factor is block diagonal across APs, so each AP's antenna slice is
    fitted independently against the shared dictionary with that AP's RF-chain
    budget; the blocks are then reassembled.
    """
    f_opt = np.atleast_2d(np.asarray(f_opt, dtype=complex))
    n_t = dictionary.matrix.shape[0]
    if f_opt.shape[0] != n_aps * n_t:
        raise ConfigurationError(
            f"precoder has {f_opt.shape[0]} rows, expected {n_aps} APs x {n_t} antennas"
        )
    if sigma_e_sq is None:
        sigma_e_sq = default_error_variance(f_opt)
    n_streams = f_opt.shape[1]
    total_rf = int(np.sum(n_rf_per_ap))
    f_rf = np.zeros((n_aps * n_t, total_rf), dtype=complex)
    f_bb = np.zeros((total_rf, n_streams), dtype=complex)
    support = []
    col = 0
    for m in range(n_aps):
        slice_m = f_opt[m * n_t:(m + 1) * n_t, :]
        state = em_sbl(slice_m, dictionary, sigma_e_sq, k_max, epsilon)
        part = extract_hybrid(state, dictionary, int(n_rf_per_ap[m]), slice_m)
        k = int(n_rf_per_ap[m])
        f_rf[m * n_t:(m + 1) * n_t, col:col + k] = part.f_rf
        f_bb[col:col + k, :] = part.f_bb
        support.append(part.support[0])
        col += k
    residual = float(np.linalg.norm(f_opt - f_rf @ f_bb))
    return HybridFactorization(f_rf=f_rf, f_bb=f_bb, support=support, residual=residual)
