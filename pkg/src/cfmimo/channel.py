"""Geometric mmWave channel generation with ULA/UPA array responses.

Each (user, AP) link is a sum of L planar-wave paths with i.i.d. CN(0,1)
gains and uniform angles; the realization is deterministic given the seed
material and the (user, AP) indices, so Monte-Carlo trials can be drawn in
any order or in parallel.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConfigurationError, DimensionError

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna panel description; spacing is the element pitch in wavelengths."""

    kind: str  # "ula" or "upa"
    n: int
    n_h: int = 0
    n_v: int = 0
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in ("ula", "upa"):
            raise ConfigurationError(f"unknown array kind {self.kind!r}")
        if self.n < 1:
            raise ConfigurationError("element count must be >= 1")
        if self.spacing <= 0:
            raise ConfigurationError("element spacing must be positive")
        if self.kind == "upa" and self.n_h * self.n_v != self.n:
            raise ConfigurationError("UPA needs n == n_h * n_v")


def ula(n: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry(kind="ula", n=n, spacing=spacing)


def upa(n_h: int, n_v: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry(kind="upa", n=n_h * n_v, n_h=n_h, n_v=n_v, spacing=spacing)


def ula_response(geometry: ArrayGeometry, phi: float) -> np.ndarray:
    """Unit-norm linear-array response for azimuth ``phi``."""
    n = np.arange(geometry.n)
    phase = 2.0 * np.pi * geometry.spacing * n * np.sin(phi)
    return np.exp(1j * phase) / np.sqrt(geometry.n)


def upa_response(geometry: ArrayGeometry, phi: float, theta: float) -> np.ndarray:
    """Unit-norm planar-array response, flattened horizontal-major.

    Element (h, v) sits at flat index h * n_v + v and contributes the phase
    2*pi*spacing*(h*sin(phi)*sin(theta) + v*cos(theta)).
    """
    h = np.arange(geometry.n_h)
    v = np.arange(geometry.n_v)
    phase = 2.0 * np.pi * geometry.spacing * (
        h[:, None] * np.sin(phi) * np.sin(theta) + v[None, :] * np.cos(theta)
    )
    return np.exp(1j * phase).reshape(-1) / np.sqrt(geometry.n)


def steering(geometry: ArrayGeometry, phi: float, theta: Optional[float] = None) -> np.ndarray:
    if geometry.kind == "ula":
        return ula_response(geometry, phi)
    if theta is None:
        raise ConfigurationError("UPA steering needs an elevation angle")
    return upa_response(geometry, phi, theta)


@dataclass
class ChannelRealization:
    """One (user, AP) link: steering matrices, path gains and assembled matrix."""

    h: np.ndarray       # n_rx x n_tx
    a_rx: np.ndarray    # n_rx x L receive steering matrix
    a_tx: np.ndarray    # n_tx x L transmit steering matrix
    gains: np.ndarray   # L complex path gains
    aoa: np.ndarray     # L receive azimuths
    aod: np.ndarray     # L transmit azimuths
    user: int = 0
    ap: int = 0
    aoa_el: Optional[np.ndarray] = None
    aod_el: Optional[np.ndarray] = None


def assemble_channel(a_rx: np.ndarray, gains: np.ndarray, a_tx: np.ndarray) -> np.ndarray:
    """sqrt(n_tx*n_rx/L) * A_rx diag(gains) A_tx^H."""
    a_rx = np.asarray(a_rx)
    a_tx = np.asarray(a_tx)
    gains = np.asarray(gains).reshape(-1)
    if a_rx.shape[1] != gains.size or a_tx.shape[1] != gains.size:
        raise DimensionError(
            f"steering column counts {a_rx.shape[1]}/{a_tx.shape[1]} do not match "
            f"{gains.size} path gains"
        )
    n_rx, n_tx = a_rx.shape[0], a_tx.shape[0]
    scale = np.sqrt(n_tx * n_rx / gains.size)
    return scale * (a_rx * gains) @ a_tx.conj().T


def draw_channel(
    seed: SeedLike,
    u: int,
    m: int,
    n_paths: int,
    tx_geometry: ArrayGeometry,
    rx_geometry: ArrayGeometry,
) -> ChannelRealization:
    """Draw the (user u, AP m) channel; deterministic in (seed, u, m).

    Gains are standard complex Gaussian, azimuths uniform on [0, 2*pi) and,
    for UPA panels, elevations uniform on [0, pi).
    """
    if n_paths < 1:
        raise ConfigurationError("need at least one propagation path")
    words = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    rng = np.random.default_rng([*words, int(u), int(m)])

    gains = (rng.standard_normal(n_paths) + 1j * rng.standard_normal(n_paths)) / np.sqrt(2.0)
    aod = rng.uniform(0.0, 2.0 * np.pi, n_paths)
    aoa = rng.uniform(0.0, 2.0 * np.pi, n_paths)
    aod_el = rng.uniform(0.0, np.pi, n_paths) if tx_geometry.kind == "upa" else None
    aoa_el = rng.uniform(0.0, np.pi, n_paths) if rx_geometry.kind == "upa" else None

    a_tx = np.column_stack([
        steering(tx_geometry, aod[l], aod_el[l] if aod_el is not None else None)
        for l in range(n_paths)
    ])
    a_rx = np.column_stack([
        steering(rx_geometry, aoa[l], aoa_el[l] if aoa_el is not None else None)
        for l in range(n_paths)
    ])
    h = assemble_channel(a_rx, gains, a_tx)
    return ChannelRealization(
        h=h, a_rx=a_rx, a_tx=a_tx, gains=gains, aoa=aoa, aod=aod,
        user=u, ap=m, aoa_el=aoa_el, aod_el=aod_el,
    )
