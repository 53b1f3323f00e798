import pytest

from cfmimo.config import SystemConfig, parse_config, with_overrides
from cfmimo.errors import ConfigParseError, ConfigurationError

FIG3A = "scenario=unicast\nM=4\nU=4\nN_T=16\nN_R=8\nN_RF_ap=4"


def test_empty_config_needs_scenario():
    with pytest.raises(ConfigurationError, match="scenario"):
        parse_config("")


def test_fig3a_snippet_parses_with_defaults():
    cfg = parse_config(FIG3A)
    assert cfg.scenario == "unicast"
    assert (cfg.m, cfg.u, cfg.n_t, cfg.n_r) == (4, 4, 16, 8)
    assert cfg.rf_chains_ap == 4
    assert cfg.rf_chains_user == 4       # defaults to the AP count
    assert cfg.n_paths == 6
    assert cfg.realizations == 3000
    assert cfg.seed == 0
    assert cfg.sigma_delta_sq == 1.0
    assert cfg.d_over_lambda == 0.5
    assert cfg.k_max == 50 and cfg.epsilon == 1e-6


def test_bad_value_reports_line_number():
    with pytest.raises(ConfigParseError, match="line 2"):
        parse_config("scenario=unicast\nM=zero")


def test_unknown_key_rejected():
    with pytest.raises(ConfigParseError, match="unknown key"):
        parse_config("scenario=unicast\nbogus=1")


def test_comments_and_blank_lines():
    cfg = parse_config("# a comment\n\nscenario=uplink  # trailing\nU=3\n")
    assert cfg.scenario == "uplink" and cfg.u == 3


def test_grid_parsing():
    cfg = parse_config("scenario=unicast\np_t_db_grid=0, 5.5 ,10")
    assert cfg.p_t_db_grid == [0.0, 5.5, 10.0]


def test_unknown_scenario():
    with pytest.raises(ConfigurationError, match="scenario must be"):
        parse_config("scenario=carrier_pigeon")


def test_unicast_user_bound():
    with pytest.raises(ConfigurationError, match="at most"):
        parse_config("scenario=unicast\nM=4\nN_RF_ap=4\nU=17")
    assert parse_config("scenario=unicast\nM=4\nN_RF_ap=4\nU=16").u == 16


def test_multicast_group_bound():
    with pytest.raises(ConfigurationError):
        parse_config("scenario=multicast\nM=1\nN_RF_ap=2\nG=3\nU_g=2")


def test_uplink_user_bound():
    with pytest.raises(ConfigurationError, match="uplink"):
        parse_config("scenario=uplink\nM=4\nN_RF_user=4\nU=5")


def test_upa_dimension_check():
    with pytest.raises(ConfigurationError, match="n_t_h"):
        parse_config("scenario=unicast\narray_kind=upa\nN_T_h=3\nN_T_v=4\nN_R_h=2\nN_R_v=4")
    cfg = parse_config(
        "scenario=unicast\narray_kind=upa\nN_T_h=4\nN_T_v=4\nN_R_h=2\nN_R_v=4")
    assert cfg.tx_geometry().kind == "upa"


def test_overrides_revalidate():
    cfg = parse_config(FIG3A)
    assert with_overrides(cfg, realizations=10).realizations == 10
    assert with_overrides(cfg, scenario="uplink").scenario == "uplink"
    with pytest.raises(ConfigurationError):
        with_overrides(cfg, scenario="bogus")


def test_multicast_total_users():
    cfg = SystemConfig(scenario="multicast", g=2, u_g=4).validate()
    assert cfg.total_users == 8
    assert cfg.rf_chains_ap == 8
