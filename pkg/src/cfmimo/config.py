"""Experiment configuration: flat key=value text format and validation."""

from dataclasses import dataclass, field, fields, replace
from typing import List, Optional

from .channel import ArrayGeometry, ula, upa
from .errors import ConfigParseError, ConfigurationError

SCENARIOS = (
    "broadcast",
    "broadcast_per_ap",
    "broadcast_maxmin",
    "unicast",
    "unicast_bl",
    "multicast",
    "uplink",
)

DEFAULT_PT_GRID = (0.0, 5.0, 10.0, 15.0, 20.0)


@dataclass
class SystemConfig:
    scenario: str
    m: int = 4                      # cooperating APs
    u: int = 4                      # users (unicast/broadcast/uplink)
    g: int = 2                      # multicast groups
    u_g: int = 4                    # users per multicast group
    n_t: int = 16                   # AP antennas
    n_r: int = 8                    # user antennas
    n_rf_ap: Optional[int] = None   # default: one chain per served user
    n_rf_user: Optional[int] = None  # default: one chain per AP
    array_kind: str = "ula"
    n_t_h: int = 0
    n_t_v: int = 0
    n_r_h: int = 0
    n_r_v: int = 0
    n_paths: int = 6
    sigma_delta_sq: float = 1.0
    p_t_db_grid: List[float] = field(default_factory=lambda: list(DEFAULT_PT_GRID))
    realizations: int = 3000
    seed: int = 0
    d_over_lambda: float = 0.5
    s: int = 64                     # transmit dictionary grid size (BL scenarios)
    sigma_e_sq: Optional[float] = None  # None: 1e-2 * mean squared precoder entry
    k_max: int = 50
    epsilon: float = 1e-6
    shuffle_order: bool = False
    record_timing: bool = False

    @property
    def total_users(self) -> int:
        return self.g * self.u_g if self.scenario == "multicast" else self.u

    @property
    def rf_chains_ap(self) -> int:
        return self.n_rf_ap if self.n_rf_ap is not None else self.total_users

    @property
    def rf_chains_user(self) -> int:
        return self.n_rf_user if self.n_rf_user is not None else self.m

    def tx_geometry(self) -> ArrayGeometry:
        if self.array_kind == "upa":
            return upa(self.n_t_h, self.n_t_v, self.d_over_lambda)
        return ula(self.n_t, self.d_over_lambda)

    def rx_geometry(self) -> ArrayGeometry:
        if self.array_kind == "upa":
            return upa(self.n_r_h, self.n_r_v, self.d_over_lambda)
        return ula(self.n_r, self.d_over_lambda)

    def validate(self) -> "SystemConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(
                f"scenario must be one of {', '.join(SCENARIOS)}, got {self.scenario!r}"
            )
        for name in ("m", "u", "g", "u_g", "n_t", "n_r", "n_paths", "realizations",
                     "k_max", "s"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        if self.rf_chains_ap < 1 or self.rf_chains_user < 1:
            raise ConfigurationError("RF chain counts must be >= 1")
        if self.rf_chains_ap > self.total_users:
            raise ConfigurationError(
                f"n_rf_ap={self.rf_chains_ap} exceeds the {self.total_users} served "
                f"users (each AP chain carries one user's steering vector)"
            )
        if self.rf_chains_user > self.m:
            raise ConfigurationError(
                f"n_rf_user={self.rf_chains_user} exceeds the {self.m} APs "
                f"(each user chain points at one AP)"
            )
        if self.sigma_delta_sq <= 0:
            raise ConfigurationError("sigma_delta_sq must be positive")
        if self.epsilon <= 0:
            raise ConfigurationError("epsilon must be positive")
        if self.d_over_lambda <= 0:
            raise ConfigurationError("d_over_lambda must be positive")
        if not self.p_t_db_grid:
            raise ConfigurationError("p_t_db_grid must contain at least one point")
        if self.array_kind not in ("ula", "upa"):
            raise ConfigurationError("array_kind must be 'ula' or 'upa'")
        if self.array_kind == "upa":
            if self.n_t_h * self.n_t_v != self.n_t:
                raise ConfigurationError("n_t_h * n_t_v must equal n_t")
            if self.n_r_h * self.n_r_v != self.n_r:
                raise ConfigurationError("n_r_h * n_r_v must equal n_r")
        if self.scenario in ("unicast", "unicast_bl"):
            if self.u > self.m * self.rf_chains_ap:
                raise ConfigurationError(
                    f"unicast supports at most m * n_rf_ap = "
                    f"{self.m * self.rf_chains_ap} users, got {self.u}"
                )
        if self.scenario == "multicast":
            if (self.g - 1) * self.u_g >= self.m * self.rf_chains_ap:
                raise ConfigurationError(
                    "multicast needs (g-1) * u_g < m * n_rf_ap so every group "
                    "keeps a nonempty null space"
                )
        if self.scenario == "uplink" and self.u > self.rf_chains_user:
            raise ConfigurationError(
                f"uplink supports at most n_rf_user = {self.rf_chains_user} users, "
                f"got {self.u}"
            )
        if self.sigma_e_sq is not None and self.sigma_e_sq <= 0:
            raise ConfigurationError("sigma_e_sq must be positive when given")
        return self

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["p_t_db_grid"] = list(self.p_t_db_grid)
        return out


# config-file key -> (dataclass field, parser)
def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_grid(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


_KEYS = {
    "scenario": ("scenario", str),
    "M": ("m", int),
    "U": ("u", int),
    "G": ("g", int),
    "U_g": ("u_g", int),
    "N_T": ("n_t", int),
    "N_R": ("n_r", int),
    "N_RF_ap": ("n_rf_ap", int),
    "N_RF_user": ("n_rf_user", int),
    "array_kind": ("array_kind", str),
    "N_T_h": ("n_t_h", int),
    "N_T_v": ("n_t_v", int),
    "N_R_h": ("n_r_h", int),
    "N_R_v": ("n_r_v", int),
    "L": ("n_paths", int),
    "sigma_delta_sq": ("sigma_delta_sq", float),
    "p_t_db_grid": ("p_t_db_grid", _parse_grid),
    "realizations": ("realizations", int),
    "seed": ("seed", int),
    "d_over_lambda": ("d_over_lambda", float),
    "S": ("s", int),
    "sigma_e_sq": ("sigma_e_sq", float),
    "k_max": ("k_max", int),
    "epsilon": ("epsilon", float),
    "shuffle_order": ("shuffle_order", _parse_bool),
    "record_timing": ("record_timing", _parse_bool),
}


def parse_config(text: str) -> SystemConfig:
    """Parse flat key=value lines ('#' starts a comment) into a validated config."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected key=value, got {line!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ConfigParseError(f"unknown key {key!r}", lineno)
        field_name, parser = _KEYS[key]
        try:
            values[field_name] = parser(value)
        except ValueError as exc:
            raise ConfigParseError(f"bad value for {key!r}: {exc}", lineno) from exc
    if "scenario" not in values:
        raise ConfigurationError("config must name a scenario")
    return SystemConfig(**values).validate()


def with_overrides(
    config: SystemConfig,
    scenario: Optional[str] = None,
    realizations: Optional[int] = None,
    seed: Optional[int] = None,
) -> SystemConfig:
    """Apply CLI/service overrides and re-validate."""
    updates = {}
    if scenario is not None:
        updates["scenario"] = scenario
    if realizations is not None:
        updates["realizations"] = realizations
    if seed is not None:
        updates["seed"] = seed
    return replace(config, **updates).validate() if updates else config
