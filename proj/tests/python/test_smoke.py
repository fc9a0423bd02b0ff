import math

import numpy as np
import pytest

import iwfsim


def scalar_pair(a, b):
    cfg = iwfsim.uniform_config(2, 1, 1, 1.0, 1.0, 1.0, 1.0, 0.0)
    one = np.ones((1, 1), dtype=complex)
    H = [[one, one * math.sqrt(b)], [one * math.sqrt(a), one]]
    return iwfsim.build_effective_network(iwfsim.make_realization(cfg, H), cfg)


def test_water_level():
    w = iwfsim.water_level(np.array([1.0, 2.0, 4.0]), 3.0)
    assert w.level == pytest.approx(3.0)
    np.testing.assert_allclose(w.power, [2.0, 1.0, 0.0])


def test_pathloss():
    assert iwfsim.pathloss_power_gain(15.0, 2.5) == pytest.approx(1.1475506210984938e-3)


def test_svd_reconstructs():
    rng = np.random.default_rng(0)
    H = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    s = iwfsim.svd_decompose(H)
    S = np.zeros((3, 2))
    S[:2, :2] = np.diag(s.sigma)
    np.testing.assert_allclose(s.U @ S @ s.V.conj().T, H, atol=1e-12)


def test_certify_scalar_pair():
    net = scalar_pair(0.25, 0.25)
    c = iwfsim.certify(net)
    assert c.row_norm == pytest.approx(0.25)
    assert c.spectral_radius == pytest.approx(0.25)
    assert c.spectral_unique
    np.testing.assert_allclose(iwfsim.interference_matrix(net), [[0, 0.25], [0.25, 0]])


def test_game_on_sampled_network():
    cfg = iwfsim.uniform_config(4, 2, 2, 10.0, 1.0, 15.0, 45.0, 2.5)
    net = iwfsim.build_effective_network(iwfsim.sample_channels(cfg, 7), cfg)
    schedule = iwfsim.make_schedule(iwfsim.ScheduleKind.jacobi, 4, 100)
    trace = iwfsim.run_game(net, schedule, iwfsim.uniform_profile(cfg))
    assert trace.converged
    assert trace.nash_gap < 1e-5
    assert sum(trace.final_rates) == pytest.approx(iwfsim.sum_rate(net, trace.final_profile))
    assert iwfsim.is_feasible(trace.final_profile, cfg)


def test_config_errors_raise_value_error():
    cfg = iwfsim.uniform_config(2, 1, 1, 1.0, 1.0, 1.0, 1.0, 0.0)
    cfg.power_budget = [1.0, -1.0]
    with pytest.raises(ValueError, match="power_budget"):
        iwfsim.validate_config(cfg)


def test_small_sweep(tmp_path):
    spec = iwfsim.SweepSpec()
    spec.values = [15.0, 45.0]
    spec.trials = 4
    result = iwfsim.sweep_uniqueness(spec, jobs=2)
    assert [r.value for r in result.rows] == [15.0, 45.0]
    for r in result.rows:
        assert r.p_norm_cond <= r.p_spectral
    path = tmp_path / "u.csv"
    iwfsim.write_csv(result, path)
    assert path.read_text().startswith("sweep_value,p_norm_cond,")
    assert len(iwfsim.read_csv(path)) == 2
