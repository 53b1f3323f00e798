"""Cooperative hybrid beamforming library for cell-free mmWave MIMO networks.

Design algorithms (broadcast eigenbeamformers, successive MVDR unicast and
multicast precoding, sparse-Bayesian precoder decomposition, uplink nulling)
plus a Monte-Carlo sweep harness with a FastAPI service and CLI on top.
"""

__version__ = "0.1.0"
