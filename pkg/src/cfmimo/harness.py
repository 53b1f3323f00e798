"""Monte-Carlo sweep driver: scenario dispatch, seeding, CSV persistence.

Every realization is a pure function of (master seed, realization index), so
work items can be distributed across processes and merged by sort key without
affecting the output. Wall-clock timing is only recorded when the config asks
for it; the default keeps the CSV bytes reproducible.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import IO, List, Sequence, Tuple, Union

import numpy as np

from . import broadcast as bc
from . import downlink as dl
from . import sbl
from . import uplink as ul
from .channel import draw_channel
from .config import SystemConfig
from .errors import ConfigurationError, RealizationError
from .rf import concat_blocks, effective_blocks, select_rf_combiner, select_rf_precoder

CSV_HEADER = "scenario,scheme,pt_db,realization,capacity_bps_hz,min_sinr_db,wall_ms"

SCHEME_ORDER = (
    "fully_digital",
    "hybrid_pooled",
    "hybrid_per_ap",
    "hybrid_maxmin",
    "hybrid_mvdr",
    "hybrid_sbl",
    "hybrid_succ",
    "equal_power",
)


@dataclass
class SweepRecord:
    scenario: str
    scheme: str
    pt_db: float
    realization: int
    capacity_bps_hz: float
    min_sinr_db: float
    wall_ms: float


def _min_sinr_db(sinr: np.ndarray) -> float:
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(np.min(sinr)))


def _draw_channels(config: SystemConfig, realization: int):
    tx, rx = config.tx_geometry(), config.rx_geometry()
    return [
        [
            draw_channel((config.seed, realization), u, m, config.n_paths, tx, rx)
            for m in range(config.m)
        ]
        for u in range(config.total_users)
    ]


def _rf_stage(config: SystemConfig, channels):
    n_users = config.total_users
    precoders = [
        select_rf_precoder([channels[u][m] for u in range(n_users)], config.rf_chains_ap)
        for m in range(config.m)
    ]
    combiners = [select_rf_combiner(channels[u], config.rf_chains_user)
                 for u in range(n_users)]
    blocks = effective_blocks(channels, combiners, precoders)
    return precoders, combiners, blocks


def _user_order(config: SystemConfig, realization: int, n_users: int) -> np.ndarray:
    if not config.shuffle_order:
        return np.arange(n_users)
    rng = np.random.default_rng([config.seed, realization, 0xC0FFEE])
    return rng.permutation(n_users)


def _broadcast_schemes(scenario: str) -> Tuple[str, ...]:
    if scenario == "broadcast":
        return ("fully_digital", "hybrid_pooled", "hybrid_per_ap")
    if scenario == "broadcast_per_ap":
        return ("fully_digital", "hybrid_per_ap")
    return ("fully_digital", "hybrid_maxmin")


def _run_broadcast(config: SystemConfig, channels, power: float):
    _, combiners, blocks = _rf_stage(config, channels)
    w_mats = [c.matrix for c in combiners]
    raw_blocks = [[ch.h for ch in row] for row in channels]
    eye_ws = [np.eye(config.n_r)] * config.total_users
    out = []
    for scheme in _broadcast_schemes(config.scenario):
        if scheme == "fully_digital":
            design = bc.max_ssnr_design(raw_blocks, power)
            sinr, cap = bc.broadcast_capacity(design, raw_blocks, eye_ws,
                                              config.sigma_delta_sq)
        elif scheme == "hybrid_pooled":
            design = bc.max_ssnr_design(blocks, power)
            sinr, cap = bc.broadcast_capacity(design, blocks, w_mats,
                                              config.sigma_delta_sq)
        elif scheme == "hybrid_per_ap":
            design = bc.per_ap_design(blocks, power)
            sinr, cap = bc.broadcast_capacity(design, blocks, w_mats,
                                              config.sigma_delta_sq)
        else:
            design, _ = bc.maxmin_design(blocks, power)
            sinr, cap = bc.broadcast_capacity(design, blocks, w_mats,
                                              config.sigma_delta_sq)
        out.append((scheme, cap, _min_sinr_db(sinr)))
    return out


def _run_unicast(config: SystemConfig, channels, power: float, order: np.ndarray):
    _, combiners, blocks = _rf_stage(config, channels)
    eff = [concat_blocks(blocks[u]) for u in order]
    w_mats = [combiners[u].matrix for u in order]
    raw_eff = [np.hstack([ch.h for ch in channels[u]]) for u in order]
    sigma = config.sigma_delta_sq
    hybrid_covs = [sigma * (w.conj().T @ w) for w in w_mats]
    raw_covs = [sigma * np.eye(config.n_r)] * len(order)
    p_user = power / config.u
    out = []
    design = dl.fully_digital_unicast(raw_eff, sigma, p_user)
    sinr, cap = dl.unicast_capacity(design, raw_eff, raw_covs)
    out.append(("fully_digital", cap, _min_sinr_db(sinr)))
    design = dl.hybrid_unicast(eff, w_mats, sigma, p_user)
    sinr, cap = dl.unicast_capacity(design, eff, hybrid_covs)
    out.append(("hybrid_mvdr", cap, _min_sinr_db(sinr)))
    design = dl.equal_power_baseline(eff, power)
    sinr, cap = dl.unicast_capacity(design, eff, hybrid_covs)
    out.append(("equal_power", cap, _min_sinr_db(sinr)))
    return out


def _run_multicast(config: SystemConfig, channels, power: float):
    _, combiners, blocks = _rf_stage(config, channels)
    sigma = config.sigma_delta_sq
    p_group = power / config.g
    group_eff, raw_group = [], []
    for g in range(config.g):
        users = range(g * config.u_g, (g + 1) * config.u_g)
        group_eff.append(np.vstack([concat_blocks(blocks[u]) for u in users]))
        raw_group.append(np.vstack([
            np.hstack([ch.h for ch in channels[u]]) for u in users
        ]))
    out = []
    design = dl.successive_mvdr_multicast(raw_group, config.n_r, sigma, p_group)
    sinr, cap = dl.multicast_capacity(design, raw_group, config.n_r, sigma)
    out.append(("fully_digital", cap, _min_sinr_db(sinr)))
    design = dl.successive_mvdr_multicast(group_eff, config.rf_chains_user, sigma, p_group)
    sinr, cap = dl.multicast_capacity(design, group_eff, config.rf_chains_user, sigma)
    out.append(("hybrid_mvdr", cap, _min_sinr_db(sinr)))
    return out


def _run_uplink(config: SystemConfig, channels, power: float):
    precoders, _, blocks = _rf_stage(config, channels)
    sigma = config.sigma_delta_sq
    eff_ul = [concat_blocks(blocks[u]).conj().T for u in range(config.u)]
    raw_ul = [np.hstack([ch.h for ch in channels[u]]).conj().T for u in range(config.u)]
    out = []
    design = ul.successive_uplink_design(raw_ul, power, sigma)
    sinr = np.exp2(design.rates) - 1.0
    out.append(("fully_digital", ul.uplink_capacity(design), _min_sinr_db(sinr)))
    design = ul.successive_uplink_design(
        eff_ul, power, sigma, w_rf_blocks=[p.matrix for p in precoders]
    )
    sinr = np.exp2(design.rates) - 1.0
    out.append(("hybrid_succ", ul.uplink_capacity(design), _min_sinr_db(sinr)))
    return out


def _run_unicast_bl(config: SystemConfig, channels, power: float):
    sigma = config.sigma_delta_sq
    p_user = power / config.u
    raw_eff = [np.hstack([ch.h for ch in channels[u]]) for u in range(config.u)]
    raw_covs = [sigma * np.eye(config.n_r)] * config.u
    out = []
    design = dl.fully_digital_unicast(raw_eff, sigma, p_user)
    sinr, cap = dl.unicast_capacity(design, raw_eff, raw_covs)
    out.append(("fully_digital", cap, _min_sinr_db(sinr)))

    dict_tx = sbl.build_dictionary(config.n_t, config.s, config.d_over_lambda)
    dict_rx = sbl.build_dictionary(config.n_r, 2 * config.n_r, config.d_over_lambda)
    f_opt = np.column_stack(design.precoders)
    fact = sbl.decompose_precoder(
        f_opt, config.m, [config.rf_chains_ap] * config.m, dict_tx,
        config.sigma_e_sq, config.k_max, config.epsilon,
    )
    precoders = []
    for u in range(config.u):
        col = fact.f_rf @ fact.f_bb[:, u]
        norm = np.linalg.norm(col)
        precoders.append(np.sqrt(p_user) * col / norm if norm > 0 else col)
    combiners = []
    for u in range(config.u):
        w_opt = design.combiners[u].reshape(-1, 1)
        state = sbl.em_sbl(w_opt, dict_rx, config.sigma_e_sq, config.k_max,
                           config.epsilon)
        part = sbl.extract_hybrid(state, dict_rx, config.rf_chains_user, w_opt)
        combiners.append((part.f_rf @ part.f_bb).reshape(-1))
    sinrs = []
    for u in range(config.u):
        w = combiners[u]
        amps = np.array([w.conj() @ (raw_eff[u] @ f) for f in precoders])
        signal = np.abs(amps[u]) ** 2
        interference = float(np.sum(np.abs(amps) ** 2) - signal)
        noise = sigma * float(np.real(w.conj() @ w))
        sinrs.append(signal / (interference + noise))
    sinr = np.array(sinrs)
    out.append(("hybrid_sbl", float(np.sum(np.log2(1.0 + sinr))), _min_sinr_db(sinr)))
    return out


def _realization_records(config: SystemConfig, realization: int) -> List[SweepRecord]:
    try:
        channels = _draw_channels(config, realization)
        order = _user_order(config, realization, config.total_users)
        records = []
        for pt_db in config.p_t_db_grid:
            power = 10.0 ** (pt_db / 10.0)
            start = time.perf_counter() if config.record_timing else 0.0
            if config.scenario.startswith("broadcast"):
                results = _run_broadcast(config, channels, power)
            elif config.scenario == "unicast":
                results = _run_unicast(config, channels, power, order)
            elif config.scenario == "unicast_bl":
                results = _run_unicast_bl(config, channels, power)
            elif config.scenario == "multicast":
                results = _run_multicast(config, channels, power)
            else:
                results = _run_uplink(config, channels, power)
            # per-record share of the power-point's wall time; 0.0 keeps the
            # CSV byte-reproducible when timing is off (the default)
            wall = (time.perf_counter() - start) * 1e3 if config.record_timing else 0.0
            for scheme, capacity, min_sinr in results:
                records.append(SweepRecord(
                    scenario=config.scenario, scheme=scheme, pt_db=float(pt_db),
                    realization=realization, capacity_bps_hz=capacity,
                    min_sinr_db=min_sinr, wall_ms=wall / len(results),
                ))
        return records
    except Exception as exc:
        raise RealizationError(f"realization {realization}: {exc}") from exc


def run_sweep(config: SystemConfig, workers: int = 1) -> List[SweepRecord]:
    """Run the configured sweep; records are sorted by (power point,
    realization, scheme) so the output is independent of worker count."""
    config.validate()
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    indices = range(config.realizations)
    if workers == 1:
        chunks = [_realization_records(config, r) for r in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(partial(_realization_records, config), indices))
    records = [rec for chunk in chunks for rec in chunk]
    pt_index = {pt: i for i, pt in enumerate(config.p_t_db_grid)}
    scheme_index = {s: i for i, s in enumerate(SCHEME_ORDER)}
    records.sort(key=lambda r: (pt_index[r.pt_db], r.realization,
                                scheme_index.get(r.scheme, len(SCHEME_ORDER))))
    return records


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.scenario},{r.scheme},{_fmt(r.pt_db)},{r.realization},"
            f"{_fmt(r.capacity_bps_hz)},{_fmt(r.min_sinr_db)},{_fmt(r.wall_ms)}"
        )
    return "\n".join(lines) + "\n"


def write_csv(records: Sequence[SweepRecord], path: Union[str, "IO[str]"]) -> None:
    text = records_to_csv(records)
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def read_csv(path: str) -> List[SweepRecord]:
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigurationError(f"{path} does not carry the sweep CSV header")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(SweepRecord(
            scenario=parts[0], scheme=parts[1], pt_db=float(parts[2]),
            realization=int(parts[3]), capacity_bps_hz=float(parts[4]),
            min_sinr_db=float(parts[5]), wall_ms=float(parts[6]),
        ))
    return records
