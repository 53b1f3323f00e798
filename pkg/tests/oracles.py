"""Independent oracles used by the tests.

Everything here deliberately avoids the library's own code paths: eigenvalues
come from characteristic-polynomial roots, trace-capped PSD maximization from
projected gradient ascent, the max-min optimum from a zooming grid search,
SINRs from symbol-level simulation, and the SBL evidence from its definition.
"""

import numpy as np


def rand_complex(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rand_unit(rng, n):
    v = rand_complex(rng, n)
    return v / np.linalg.norm(v)


def rand_hermitian(rng, n):
    a = rand_complex(rng, n, n)
    return 0.5 * (a + a.conj().T)


def rand_pd(rng, n):
    a = rand_complex(rng, n, n)
    return a @ a.conj().T + 0.1 * np.eye(n)


def cubic_top_eig(a):
    """Largest eigenvalue of a 3x3 Hermitian matrix from the roots of its
    characteristic polynomial (no eigensolver involved)."""
    tr = np.trace(a).real
    tr2 = np.trace(a @ a).real
    det = np.linalg.det(a).real
    # det(A - x I) = -x^3 + tr x^2 - c1 x + det, c1 = (tr^2 - tr(A^2)) / 2
    c1 = 0.5 * (tr ** 2 - tr2)
    roots = np.roots([1.0, -tr, c1, -det])
    return float(np.max(roots.real))


def project_psd_trace(f, cap):
    """Euclidean projection onto {X Hermitian PSD, tr X <= cap}."""
    vals, vecs = np.linalg.eigh(0.5 * (f + f.conj().T))
    vals = np.clip(vals, 0.0, None)
    if vals.sum() > cap:
        # subtract the waterline tau with sum(max(vals - tau, 0)) == cap
        srt = np.sort(vals)[::-1]
        cum = np.cumsum(srt)
        k = np.arange(1, len(srt) + 1)
        taus = (cum - cap) / k
        valid = np.nonzero(srt - taus > 0)[0]
        tau = taus[valid[-1]]
        vals = np.clip(vals - tau, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def pga_max_trace(q, cap, tol=1e-8, max_iter=100000):
    """Projected gradient ascent for max tr(QF) s.t. tr F <= cap, F PSD,
    run to ||F_{k+1} - F_k||_F <= tol * cap stationarity."""
    n = q.shape[0]
    f = (cap / (2 * n)) * np.eye(n, dtype=complex)
    step = cap / max(np.linalg.norm(q), 1e-12)
    for _ in range(max_iter):
        f_next = project_psd_trace(f + step * q, cap)
        if np.linalg.norm(f_next - f) <= tol * cap:
            f = f_next
            break
        f = f_next
    return float(np.real(np.trace(q @ f))), f


def _rank_profile_grid(cap, sizes, ranges):
    """2x2 PSD matrices with trace cap: cap*(p vv^H + (1-p)(I - vv^H))."""
    thetas = np.linspace(*ranges[0], sizes[0])
    phis = np.linspace(*ranges[1], sizes[1])
    ps = np.linspace(*ranges[2], sizes[2])
    mats, params = [], []
    for th in thetas:
        v = np.array([np.cos(th), 0.0], dtype=complex)
        sin_th = np.sin(th)
        for ph in phis:
            v[1] = sin_th * np.exp(1j * ph)
            vv = np.outer(v, v.conj())
            rest = np.eye(2) - vv
            for p in ps:
                mats.append(cap * (p * vv + (1 - p) * rest))
                params.append((th, ph, p))
    return np.array(mats), params


def grid_maxmin(q, p_total, levels=5, sizes=(13, 19, 7)):
    """Zooming grid search for max_F min_u sum_m tr(Q_um F_m) with per-AP
    trace caps; q indexed [user][ap], 2x2 blocks, at most two APs."""
    n_users, n_aps = len(q), len(q[0])
    cap = p_total / n_aps
    ranges = [[(0.0, np.pi / 2), (0.0, 2 * np.pi), (0.5, 1.0)] for _ in range(n_aps)]
    best_val = -np.inf
    for _ in range(levels):
        grids = []
        for m in range(n_aps):
            mats, params = _rank_profile_grid(cap, sizes, ranges[m])
            vals = np.stack([
                np.real(np.einsum("kij,ji->k", mats, q[u][m])) for u in range(n_users)
            ])
            grids.append((vals, params))
        if n_aps == 1:
            vals, params = grids[0]
            scores = vals.min(axis=0)
            k = int(np.argmax(scores))
            best_val, best_params = float(scores[k]), [params[k]]
        else:
            v1, p1 = grids[0]
            v2, p2 = grids[1]
            best_val, pair = -np.inf, (0, 0)
            chunk = 512
            for i0 in range(0, v1.shape[1], chunk):
                sl = slice(i0, min(i0 + chunk, v1.shape[1]))
                s = np.minimum.reduce([
                    v1[u, sl][:, None] + v2[u][None, :] for u in range(n_users)
                ])
                k = np.unravel_index(int(np.argmax(s)), s.shape)
                if s[k] > best_val:
                    best_val, pair = float(s[k]), (i0 + k[0], k[1])
            best_params = [p1[pair[0]], p2[pair[1]]]
        for m in range(n_aps):
            for d in range(3):
                lo, hi = ranges[m][d]
                width = (hi - lo) / 3.0
                center = best_params[m][d]
                new_lo, new_hi = center - width / 2, center + width / 2
                if d == 0:
                    new_lo, new_hi = max(0.0, new_lo), min(np.pi / 2, new_hi)
                elif d == 2:
                    new_lo, new_hi = max(0.5, new_lo), min(1.0, new_hi)
                ranges[m][d] = (new_lo, new_hi)
    return best_val


def sbl_log_evidence(g, gamma, f, sigma_e_sq):
    """log p(F; Gamma) evaluated from its definition."""
    n = g.shape[0]
    sigma_y = sigma_e_sq * np.eye(n, dtype=complex) + (g * gamma) @ g.conj().T
    _, logdet = np.linalg.slogdet(sigma_y)
    quad = float(np.real(np.sum(np.conj(f) * np.linalg.solve(sigma_y, f))))
    return -(f.shape[1] * (n * np.log(np.pi) + logdet) + quad)


def planted_sbl_instance(rng, dictionary, n_atoms, n_streams, max_coherence=0.5):
    """Target matrix built from exactly n_atoms well-separated dictionary
    columns; returns (support indices, target)."""
    g = dictionary.matrix
    s = g.shape[1]
    while True:
        sel = np.sort(rng.choice(s, size=n_atoms, replace=False))
        sub = g[:, sel]
        coh = np.abs(sub.conj().T @ sub)
        np.fill_diagonal(coh, 0.0)
        if coh.max() < max_coherence:
            break
    weights = rand_complex(rng, n_atoms, n_streams)
    return sel, g[:, sel] @ weights


def empirical_sinr(h_eff, precoders, combiner, user, noise_cov, rng, n_symbols=100000):
    """Symbol-level SINR estimate: unit-power Gaussian symbols through the
    effective model, noise with the given covariance, fixed combiner."""
    n_users = len(precoders)
    symbols = rand_complex(rng, n_users, n_symbols)
    rx = (h_eff @ np.column_stack(precoders)) @ symbols
    chol = np.linalg.cholesky(noise_cov)
    rx += chol @ rand_complex(rng, h_eff.shape[0], n_symbols)
    est = combiner.conj() @ rx
    a = combiner.conj() @ (h_eff @ precoders[user])
    resid = est - a * symbols[user]
    return float(np.abs(a) ** 2 / np.mean(np.abs(resid) ** 2))
