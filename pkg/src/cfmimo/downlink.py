"""Successive MVDR downlink designs for unicast and multicast traffic.

Users (or user groups) are scheduled in order; each new precoder is confined
to the null space of the rows w_v^H H_v of everyone scheduled before it, and
the combiner is the SINR-maximizing MVDR filter against the residual
interference-plus-noise covariance. The same recursion applied to the raw
antenna-domain channels yields the fully-digital reference design.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapacityExceededError, ConfigurationError
from .linalg import inv_sqrt, nullspace_basis, principal_singular_triple


@dataclass
class UnicastDesign:
    precoders: List[np.ndarray]
    combiners: List[np.ndarray]
    constraint_rows: np.ndarray              # stacked w_v^H H_v rows, scheduling order
    covariances: List[np.ndarray]            # interference-plus-noise per user
    design_sinr: Optional[np.ndarray] = None  # SINR implied by the recursion


@dataclass
class MulticastDesign:
    precoders: List[np.ndarray]              # one per group
    combiners: List[np.ndarray]              # stacked combiner per group
    combiner_segments: List[List[np.ndarray]]  # per-group per-user slices
    constraint_rows: np.ndarray
    covariances: List[np.ndarray]


def interference_covariance(
    prior_precoders: Sequence[np.ndarray],
    h_eff_u: np.ndarray,
    w_rf_u: np.ndarray,
    sigma_delta_sq: float,
) -> np.ndarray:
    """sum_i H_u f_i f_i^H H_u^H + sigma^2 W_rf^H W_rf."""
    c = sigma_delta_sq * (w_rf_u.conj().T @ w_rf_u)
    for f in prior_precoders:
        v = h_eff_u @ f
        c = c + np.outer(v, v.conj())
    return c


def successive_mvdr(
    eff: Sequence[np.ndarray],
    noise_covs: Sequence[np.ndarray],
    power_per_user: float = 1.0,
) -> UnicastDesign:
    """Unicast recursion over per-user channels H_u (rows: user side).

    noise_covs[u] is the combined-noise covariance seen by user u
    (sigma^2 W_rf^H W_rf in the hybrid case, sigma^2 I fully digital).
    """
    n_users = len(eff)
    if n_users == 0:
        raise ConfigurationError("need at least one user")
    n = eff[0].shape[1]
    if n_users > n:
        raise CapacityExceededError(
            f"{n_users} users exceed the {n} separable streams the RF-chain "
            f"budget supports"
        )
    rows: List[np.ndarray] = []
    precoders, combiners, covariances, sinrs = [], [], [], []
    scale = np.sqrt(power_per_user)
    for u in range(n_users):
        m_prev = np.vstack(rows) if rows else np.zeros((0, n), dtype=complex)
        basis = nullspace_basis(m_prev)
        cov = noise_covs[u].astype(complex).copy()
        for f in precoders:
            v = eff[u] @ f
            cov += np.outer(v, v.conj())
        c_half = inv_sqrt(cov)
        triple = principal_singular_triple(c_half @ eff[u] @ basis)
        f_u = scale * (basis @ triple.right)
        w_u = c_half.conj().T @ triple.left
        precoders.append(f_u)
        combiners.append(w_u)
        covariances.append(cov)
        sinrs.append(power_per_user * triple.sigma ** 2)
        rows.append(w_u.conj() @ eff[u])
    return UnicastDesign(
        precoders=precoders,
        combiners=combiners,
        constraint_rows=np.vstack(rows),
        covariances=covariances,
        design_sinr=np.array(sinrs),
    )


def hybrid_unicast(
    eff: Sequence[np.ndarray],
    w_rf: Sequence[np.ndarray],
    sigma_delta_sq: float,
    power_per_user: float = 1.0,
) -> UnicastDesign:
    """Unicast design on RF-combined channels; noise covariance is
    sigma^2 W_rf^H W_rf per user."""
    covs = [sigma_delta_sq * (w.conj().T @ w) for w in w_rf]
    return successive_mvdr(eff, covs, power_per_user)


def fully_digital_unicast(
    channels: Sequence[np.ndarray], sigma_delta_sq: float, power_per_user: float = 1.0
) -> UnicastDesign:
    """Reference design on raw antenna-domain channels (white noise)."""
    n_rx = channels[0].shape[0]
    covs = [sigma_delta_sq * np.eye(n_rx, dtype=complex) for _ in channels]
    return successive_mvdr(channels, covs, power_per_user)


def equal_power_baseline(
    eff: Sequence[np.ndarray], p_total: float, power_fraction: Optional[float] = None
) -> UnicastDesign:
    """Matched-beamforming baseline: equal power split, no nulling, plain MRC."""
    n_users = len(eff)
    if n_users == 0:
        raise ConfigurationError("need at least one user")
    p_user = p_total / n_users if power_fraction is None else power_fraction
    precoders, combiners = [], []
    for h in eff:
        triple = principal_singular_triple(h)
        f = np.sqrt(p_user) * triple.right
        z = h @ f
        precoders.append(f)
        combiners.append(z / np.linalg.norm(z))
    return UnicastDesign(
        precoders=precoders,
        combiners=combiners,
        constraint_rows=np.zeros((0, eff[0].shape[1]), dtype=complex),
        covariances=[],
    )


def unicast_capacity(
    design: UnicastDesign,
    eff: Sequence[np.ndarray],
    noise_covs: Sequence[np.ndarray],
) -> Tuple[np.ndarray, float]:
    """Per-user SINR (all cross terms plus combined-noise power) and capacity."""
    sinrs = []
    for u, h in enumerate(eff):
        w = design.combiners[u]
        amps = np.array([w.conj() @ (h @ f) for f in design.precoders])
        signal = np.abs(amps[u]) ** 2
        interference = float(np.sum(np.abs(amps) ** 2) - signal)
        noise = float(np.real(w.conj() @ noise_covs[u] @ w))
        sinrs.append(signal / (interference + noise))
    sinr = np.array(sinrs)
    return sinr, float(np.sum(np.log2(1.0 + sinr)))


def successive_mvdr_multicast(
    group_eff: Sequence[np.ndarray],
    segment_size: int,
    sigma_delta_sq: float,
    power_per_group: float = 1.0,
) -> MulticastDesign:
    """Multicast recursion over stacked per-group channels.

    group_eff[g] stacks the U_g users' effective channels (segment_size rows
    each). The combined-noise covariance is sigma^2 I at the stacked level.
    """
    n_groups = len(group_eff)
    if n_groups == 0:
        raise ConfigurationError("need at least one group")
    n = group_eff[0].shape[1]
    rows: List[np.ndarray] = []
    precoders, combiners, segment_lists, covariances = [], [], [], []
    scale = np.sqrt(power_per_group)
    for g in range(n_groups):
        if len(rows) >= n:
            raise CapacityExceededError(
                f"group {g} has no null space left: {len(rows)} constraint rows "
                f"fill the {n} available dimensions"
            )
        m_prev = np.vstack(rows) if rows else np.zeros((0, n), dtype=complex)
        basis = nullspace_basis(m_prev)
        dim = group_eff[g].shape[0]
        cov = sigma_delta_sq * np.eye(dim, dtype=complex)
        for f in precoders:
            v = group_eff[g] @ f
            cov += np.outer(v, v.conj())
        c_half = inv_sqrt(cov)
        triple = principal_singular_triple(c_half @ group_eff[g] @ basis)
        f_g = scale * (basis @ triple.right)
        w_g = c_half.conj().T @ triple.left
        n_users = dim // segment_size
        segments = [w_g[i * segment_size:(i + 1) * segment_size] for i in range(n_users)]
        precoders.append(f_g)
        combiners.append(w_g)
        segment_lists.append(segments)
        covariances.append(cov)
        for i, seg in enumerate(segments):
            rows.append(seg.conj() @ group_eff[g][i * segment_size:(i + 1) * segment_size])
    return MulticastDesign(
        precoders=precoders,
        combiners=combiners,
        combiner_segments=segment_lists,
        constraint_rows=np.vstack(rows),
        covariances=covariances,
    )


def multicast_capacity(
    design: MulticastDesign,
    group_eff: Sequence[np.ndarray],
    segment_size: int,
    sigma_delta_sq: float,
) -> Tuple[np.ndarray, float]:
    """Per-user SINR across all groups (noise power sigma^2 ||w_u||^2)."""
    sinrs = []
    for g, h_g in enumerate(group_eff):
        n_users = h_g.shape[0] // segment_size
        for i in range(n_users):
            h_ui = h_g[i * segment_size:(i + 1) * segment_size]
            w = design.combiner_segments[g][i]
            amps = np.array([w.conj() @ (h_ui @ f) for f in design.precoders])
            signal = np.abs(amps[g]) ** 2
            interference = float(np.sum(np.abs(amps) ** 2) - signal)
            noise = sigma_delta_sq * float(np.real(w.conj() @ w))
            sinrs.append(signal / (interference + noise))
    sinr = np.array(sinrs)
    return sinr, float(np.sum(np.log2(1.0 + sinr)))
