"""Broadcast beamformer family: one common stream for all users.

Three designs over the stacked baseband precoder:
  * pooled SSNR maximizer (leading eigenmode, total power budget),
  * per-AP budgeted SSNR maximizer (trace-capped PSD program whose optimum is
    closed-form rank-1 per AP),
  * max-min fairness program (semidefinite relaxation solved exactly, then
    rank-1 extraction).
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import cvxpy as cp
import numpy as np

from .errors import ConfigurationError, DegenerateInputError, SolverError
from .linalg import inv_sqrt, top_eigpair
from .rf import concat_blocks


@dataclass
class BroadcastDesign:
    f_bb: np.ndarray                      # stacked baseband precoder
    segments: List[np.ndarray]            # per-AP slices of f_bb
    power: float                          # total power budget
    ssnr: float                           # design objective value at f_bb
    combiners: List[np.ndarray] = field(default_factory=list)
    snr: Optional[np.ndarray] = None
    sdp_objective: Optional[float] = None      # relaxed-program optimum
    extracted_objective: Optional[float] = None  # objective after rank-1 extraction
    gamma: Optional[float] = None              # max-min target (fairness design)


def _gram(blocks_u: Sequence[np.ndarray]) -> np.ndarray:
    h = concat_blocks(blocks_u)
    return h.conj().T @ h


def _split(f: np.ndarray, sizes: Sequence[int]) -> List[np.ndarray]:
    out, k = [], 0
    for n in sizes:
        out.append(f[k:k + n])
        k += n
    return out


def max_ssnr_design(blocks: Sequence[Sequence[np.ndarray]], p_total: float) -> BroadcastDesign:
    """Pooled-power design: scaled top eigenvector of sum_u H_u^H H_u."""
    if len(blocks) == 0:
        raise ConfigurationError("broadcast needs at least one user")
    if p_total <= 0:
        raise ConfigurationError("power budget must be positive")
    sizes = [b.shape[1] for b in blocks[0]]
    h = sum(_gram(bu) for bu in blocks)
    pair = top_eigpair(h)
    f = np.sqrt(p_total) * pair.vector
    return BroadcastDesign(
        f_bb=f, segments=_split(f, sizes), power=p_total,
        ssnr=p_total * pair.value,
    )


def per_ap_design(blocks: Sequence[Sequence[np.ndarray]], p_total: float) -> BroadcastDesign:
    """Equal per-AP budgets P/M; each AP's trace-capped PSD subproblem is
    maximized by a rank-1 matrix along the top eigenvector of its own
    sum_u H_{u,m}^H H_{u,m}, so no SDP solver is needed."""
    if len(blocks) == 0:
        raise ConfigurationError("broadcast needs at least one user")
    if p_total <= 0:
        raise ConfigurationError("power budget must be positive")
    n_aps = len(blocks[0])
    per_ap = p_total / n_aps
    segments, objective = [], 0.0
    for m in range(n_aps):
        q = sum(bu[m].conj().T @ bu[m] for bu in blocks)
        pair = top_eigpair(q)
        segments.append(np.sqrt(per_ap) * pair.vector)
        objective += per_ap * pair.value
    f = np.concatenate(segments)
    return BroadcastDesign(
        f_bb=f, segments=segments, power=p_total, ssnr=objective,
        sdp_objective=objective, extracted_objective=objective,
    )


def maxmin_design(
    blocks: Sequence[Sequence[np.ndarray]], p_total: float
) -> Tuple[BroadcastDesign, float]:
    """Max-min fairness with per-AP budgets P/M.

    The rank-relaxed program (maximize gamma subject to per-user received
    power >= gamma, per-AP trace caps, PSD) is solved exactly with an
    interior-point SDP solver, then each AP's matrix is collapsed to its
    leading eigen-direction. Both the relaxed optimum and the post-extraction
    min-user power are reported so the rank-1 gap stays observable.
    """
    if len(blocks) == 0:
        raise ConfigurationError("broadcast needs at least one user")
    if p_total <= 0:
        raise ConfigurationError("power budget must be positive")
    n_aps = len(blocks[0])
    per_ap = p_total / n_aps
    q = [[bu[m].conj().T @ bu[m] for m in range(n_aps)] for bu in blocks]
    # solve in normalized units (unit trace caps, O(1) gains) for conditioning
    q_scale = max(max(np.linalg.norm(qm) for qm in qu) for qu in q) or 1.0
    q_unit = [[qm / q_scale for qm in qu] for qu in q]

    fs = [cp.Variable((qm.shape[0], qm.shape[0]), hermitian=True) for qm in q[0]]
    gamma = cp.Variable()
    constraints = [f >> 0 for f in fs]
    constraints += [cp.real(cp.trace(f)) <= 1.0 for f in fs]
    for qu in q_unit:
        constraints.append(
            cp.sum([cp.real(cp.trace(qu[m] @ fs[m])) for m in range(n_aps)]) >= gamma
        )
    problem = cp.Problem(cp.Maximize(gamma), constraints)
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError as exc:  # pragma: no cover - solver issues
        raise SolverError(f"max-min SDP solve failed: {exc}") from exc
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SolverError(f"max-min SDP ended with status {problem.status}")

    f_mats = []
    for f in fs:
        mat = 0.5 * per_ap * (f.value + f.value.conj().T)
        # clip tiny negative eigenvalues and enforce the trace cap exactly
        vals, vecs = np.linalg.eigh(mat)
        vals = np.clip(vals, 0.0, None)
        total = vals.sum()
        if total > per_ap:
            vals *= per_ap / total
        f_mats.append((vecs * vals) @ vecs.conj().T)

    received = np.array([
        sum(np.real(np.trace(qu[m] @ f_mats[m])) for m in range(n_aps)) for qu in q
    ])
    gamma_star = float(received.min())

    segments = []
    for mat in f_mats:
        pair = top_eigpair(mat)
        segments.append(np.sqrt(max(pair.value, 0.0)) * pair.vector)
    f_vec = np.concatenate(segments)
    extracted = np.array([
        sum(np.real(seg.conj() @ qu[m] @ seg) for m, seg in enumerate(segments)) for qu in q
    ])
    design = BroadcastDesign(
        f_bb=f_vec, segments=segments, power=p_total,
        ssnr=float(received.sum()),
        sdp_objective=gamma_star,
        extracted_objective=float(extracted.min()),
        gamma=gamma_star,
    )
    return design, gamma_star


def mrc_combiner(
    h_eff_u: np.ndarray, f_bb: np.ndarray, w_rf_u: np.ndarray, sigma_delta_sq: float
) -> np.ndarray:
    """Whitened matched filter: unit-norm R^(-1/2) H f with R = sigma^2 W^H W."""
    r = sigma_delta_sq * (w_rf_u.conj().T @ w_rf_u)
    z = inv_sqrt(r) @ (h_eff_u @ f_bb)
    norm = np.linalg.norm(z)
    if norm == 0:
        raise DegenerateInputError("matched-filter direction is zero")
    return z / norm


def broadcast_capacity(
    design: BroadcastDesign,
    blocks: Sequence[Sequence[np.ndarray]],
    w_rf: Sequence[np.ndarray],
    sigma_delta_sq: float,
) -> Tuple[np.ndarray, float]:
    """Per-user SNR on the noise-whitened model and the sum capacity.

    With MRC combining the whitened SNR is ||R^(-1/2) H_u f||^2, so the
    combiners are recorded on the design and the SNR computed directly.
    """
    snrs, combiners = [], []
    for bu, w in zip(blocks, w_rf):
        h_u = concat_blocks(bu)
        r = sigma_delta_sq * (w.conj().T @ w)
        z = inv_sqrt(r) @ (h_u @ design.f_bb)
        snr = float(np.real(z.conj() @ z))
        norm = np.linalg.norm(z)
        combiners.append(z / norm if norm > 0 else z)
        snrs.append(snr)
    snr_arr = np.array(snrs)
    design.combiners = combiners
    design.snr = snr_arr
    capacity = float(np.sum(np.log2(1.0 + snr_arr)))
    return snr_arr, capacity
