"""Successive uplink precoder design with symmetric interference nulling.

Each user's baseband precoder maximizes its received power at the cooperating
APs inside the null space of the cross-coupling rows f_i^H H_i^H H_u of the
previously scheduled users; because the nulled bilinear form is symmetric in
(i, u), no scheduled pair interferes in either direction. The AP-side
baseband combiner is the matched filter H_u f_u.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import CapacityExceededError, ConfigurationError
from .linalg import nullspace_basis, top_eigpair


@dataclass
class UplinkDesign:
    precoders: List[np.ndarray]       # per-user baseband precoders, ||f||^2 = P
    combiners: List[np.ndarray]       # AP-side matched filters H_u f_u
    rates: np.ndarray                 # per-user rates log2(1 + P ||H M b||^2 / sigma^2)
    power: float
    combiner_norms: np.ndarray        # ||W_rf w_bb|| per user (reported, not constrained)


def successive_uplink_design(
    eff: Sequence[np.ndarray],
    power: float,
    sigma_delta_sq: float = 1.0,
    w_rf_blocks: Optional[Sequence[np.ndarray]] = None,
) -> UplinkDesign:
    """Design uplink precoders for users scheduled in index order.

    eff[u] is the AP-side effective channel of user u (rows: AP chains,
    columns: user chains). ``w_rf_blocks`` optionally holds the per-AP RF
    combiners so the physical combiner norm can be reported.
    """
    n_users = len(eff)
    if n_users == 0:
        raise ConfigurationError("need at least one user")
    if power <= 0:
        raise ConfigurationError("transmit power must be positive")
    precoders, combiners, gains = [], [], []
    for u in range(n_users):
        n_user = eff[u].shape[1]
        if u >= n_user:
            raise CapacityExceededError(
                f"user {u} has no null space left with {n_user} RF chains"
            )
        rows = [
            (f.conj() @ eff[i].conj().T) @ eff[u]
            for i, f in enumerate(precoders)
        ]
        m_prev = np.vstack(rows) if rows else np.zeros((0, n_user), dtype=complex)
        basis = nullspace_basis(m_prev)
        hm = eff[u] @ basis
        pair = top_eigpair(hm.conj().T @ hm)
        f_u = np.sqrt(power) * (basis @ pair.vector)
        precoders.append(f_u)
        combiners.append(eff[u] @ f_u)
        gains.append(max(pair.value, 0.0))
    rates = np.log2(1.0 + power * np.array(gains) / sigma_delta_sq)

    if w_rf_blocks is not None:
        sizes = [w.shape[1] for w in w_rf_blocks]
        norms = []
        for w_bb in combiners:
            total, k = 0.0, 0
            for w, n in zip(w_rf_blocks, sizes):
                seg = w_bb[k:k + n]
                total += float(np.linalg.norm(w @ seg) ** 2)
                k += n
            norms.append(np.sqrt(total))
        combiner_norms = np.array(norms)
    else:
        combiner_norms = np.array([float(np.linalg.norm(w)) for w in combiners])

    return UplinkDesign(
        precoders=precoders, combiners=combiners, rates=rates,
        power=power, combiner_norms=combiner_norms,
    )


def uplink_capacity(design: UplinkDesign) -> float:
    return float(np.sum(design.rates))
