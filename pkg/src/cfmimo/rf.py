"""RF-stage construction from dominant array response vectors.

The RF precoder of an AP takes one transmit steering vector per served user
(the user's strongest path); the RF combiner of a user takes one receive
steering vector per AP. All entries have modulus 1/sqrt(array size), the
analog phase-shifter constraint.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .channel import ChannelRealization
from .errors import ConfigurationError, DimensionError


@dataclass
class RfPrecoder:
    matrix: np.ndarray            # n_tx x n_rf
    selected: List[tuple]         # (source index, path index) per column


@dataclass
class RfCombiner:
    matrix: np.ndarray            # n_rx x n_rf
    selected: List[tuple]


def _strongest_path(ch: ChannelRealization) -> int:
    # ties broken by lowest path index (argmax returns the first maximum)
    return int(np.argmax(np.abs(ch.gains)))


def _pick_sources(channels: Sequence[ChannelRealization], n_rf: int) -> List[int]:
    if n_rf > len(channels):
        raise ConfigurationError(
            f"{n_rf} RF chains requested but only {len(channels)} links available"
        )
    if n_rf == len(channels):
        return list(range(len(channels)))
    # fewer chains than links: keep those with the globally largest peak gain
    peaks = np.array([np.abs(ch.gains).max() for ch in channels])
    order = np.argsort(-peaks, kind="stable")[:n_rf]
    return sorted(int(i) for i in order)


def select_rf_precoder(channels: Sequence[ChannelRealization], n_rf: int) -> RfPrecoder:
    """RF precoder for one AP from per-user channels (one column per user)."""
    cols, sel = [], []
    for i in _pick_sources(channels, n_rf):
        l = _strongest_path(channels[i])
        cols.append(channels[i].a_tx[:, l])
        sel.append((i, l))
    return RfPrecoder(matrix=np.column_stack(cols), selected=sel)


def select_rf_combiner(channels: Sequence[ChannelRealization], n_rf: int) -> RfCombiner:
    """RF combiner for one user from per-AP channels (one column per AP)."""
    cols, sel = [], []
    for i in _pick_sources(channels, n_rf):
        l = _strongest_path(channels[i])
        cols.append(channels[i].a_rx[:, l])
        sel.append((i, l))
    return RfCombiner(matrix=np.column_stack(cols), selected=sel)


def effective_channel(w_rf: np.ndarray, h: np.ndarray, f_rf: np.ndarray) -> np.ndarray:
    """Baseband-visible block W_rf^H H F_rf."""
    if w_rf.shape[0] != h.shape[0] or h.shape[1] != f_rf.shape[0]:
        raise DimensionError(
            f"non-conformable shapes {w_rf.shape}, {h.shape}, {f_rf.shape}"
        )
    return w_rf.conj().T @ h @ f_rf


def effective_blocks(
    channels: Sequence[Sequence[ChannelRealization]],
    combiners: Sequence[RfCombiner],
    precoders: Sequence[RfPrecoder],
) -> List[List[np.ndarray]]:
    """Per-(user, AP) effective blocks; channels is indexed [user][ap]."""
    return [
        [effective_channel(combiners[u].matrix, channels[u][m].h, precoders[m].matrix)
         for m in range(len(precoders))]
        for u in range(len(combiners))
    ]


def concat_blocks(blocks_u: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate one user's per-AP blocks in AP order."""
    return np.hstack(blocks_u)
