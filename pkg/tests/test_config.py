import pytest

from wlprecode import ConfigurationError, SystemConfig


def test_derived_quantities():
    cfg = SystemConfig(n_antennas=100, n_users=150, snr=100.0, noise_variance=2.0)
    assert cfg.beta == 1.5
    assert cfg.tx_power == 200.0
    assert cfg.rho == pytest.approx(200.0 / 150.0, rel=0, abs=0)
    assert cfg.real_noise_variance == 1.0


@pytest.mark.parametrize("n,k,snr,sigma2", [
    (100, 150, 100.0, 1.0),
    (64, 17, 31.622776601683793, 0.5),
    (7, 7, 1e-3, 3.0),
])
def test_gamma_two_definitions_agree(n, k, snr, sigma2):
    cfg = SystemConfig(n_antennas=n, n_users=k, snr=snr, noise_variance=sigma2)
    direct = cfg.noise_variance / (cfg.rho * cfg.n_antennas)
    assert cfg.gamma == pytest.approx(direct, rel=1e-15)
    assert cfg.gamma == pytest.approx(cfg.beta / cfg.snr, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(n_antennas=0, n_users=1, snr=1.0),
    dict(n_antennas=1, n_users=0, snr=1.0),
    dict(n_antennas=1, n_users=1, snr=0.0),
    dict(n_antennas=1, n_users=1, snr=-2.0),
    dict(n_antennas=1, n_users=1, snr=1.0, noise_variance=0.0),
    dict(n_antennas=1, n_users=1, snr=1.0, noise_variance=-1.0),
])
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(ConfigurationError):
        SystemConfig(**kwargs)


def test_config_is_immutable():
    cfg = SystemConfig(n_antennas=4, n_users=2, snr=10.0)
    with pytest.raises(Exception):
        cfg.n_users = 3
