import csv

import numpy as np
import pytest

import anthracnose_filter as af


def short_config(**sim):
    cfg = af.parse_config("t_end = 0.1\ntau = 0.05\n")
    for k, v in sim.items():
        setattr(cfg.sim, k, v)
    return cfg


def test_defaults():
    cfg = af.parse_config("")
    assert cfg.sim.dt == 1e-3
    assert cfg.filter.grid.dx == 0.1
    assert cfg.params.b2 == pytest.approx(5.756412734984948)
    assert len(cfg.matrix) == 8
    assert "sigma" in af.config_keys()


def test_bad_value_names_key():
    with pytest.raises(af.ValidationError, match="sigma"):
        af.parse_config("sigma = 1.5\n")


def test_simulate_stays_in_box():
    path = af.simulate(short_config(seed=3))
    assert path["times"].shape == (101,)
    for key in ("theta", "rho"):
        assert np.all((path[key] >= 0) & (path[key] <= 1))
    assert path["clamped_fraction"] == 0.0


def test_filters_agree_on_same_path():
    cfg = short_config()
    z = af.run_filter(cfg, "zakai")
    ks = af.run_filter(cfg, "ks")
    np.testing.assert_allclose(z["mean"], ks["mean"], atol=1e-8)
    assert np.all(z["variance"] >= 0)


def test_discrete_and_oracle_run():
    cfg = short_config()
    cfg.filter.dtau = 0.02
    cfg.filter.particles = 200
    d = af.run_filter(cfg, "discrete")
    assert d["times"].shape == (6,)
    o = af.run_filter(cfg, "oracle")
    assert np.all(np.isfinite(o["mean"]))


def test_unknown_method():
    with pytest.raises(af.ValidationError, match="methods"):
        af.run_filter(short_config(), "euler")


def test_predict_is_a_density():
    cfg = short_config()
    cfg.filter.grid.dx = 0.01
    out = af.predict(cfg, 0.05, 0.05)
    assert np.trapz(out["predicted"], out["x"]) == pytest.approx(1.0, abs=1e-12)
    assert np.all(out["predicted"] >= 0)
    with pytest.raises(af.ValidationError, match="horizon"):
        af.predict(cfg, 0.05, -1.0)


def test_compare_writes_files(tmp_path):
    cfg = af.parse_config("t_end = 0.02\ntau = 0.01\nmethods = zakai, ks\n")
    rows = af.compare(cfg, tmp_path)
    assert len(rows) == 16
    with open(tmp_path / "summary.csv") as f:
        assert len(list(csv.DictReader(f))) == 16
    with open(rows[0]["file"]) as f:
        header = f.readline().strip()
    assert header == "time,theta_true,v_true,rho_true,X,Y,post_mean,post_var,rel_abs_err,zeta"
