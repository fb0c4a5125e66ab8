import math

import numpy as np
import pytest

import qbus


def test_initial_entanglement_equals_squeezing():
    for r in (0.1, 1.0, 2.5):
        bc = qbus.extract_two_mode(qbus.tmtss_cm(r), qbus.MODE_B, qbus.MODE_C)
        assert bc.shape == (4, 4)
        assert qbus.log_negativity(bc) == pytest.approx(r, abs=1e-10)


def test_vacuum_pair():
    vac = np.eye(4)
    assert qbus.log_negativity(vac) == 0.0
    assert qbus.mutual_information(vac) == 0.0
    assert qbus.steering(vac, forward=False) == 0.0
    minus, plus = qbus.symplectic_eigenvalues(vac)
    assert minus == pytest.approx(1.0)
    assert plus == pytest.approx(1.0)
    value, theta = qbus.bell_max(vac)
    assert value == pytest.approx(2.0)


def test_transfer_time_and_windows():
    params = qbus.build_effective_params(qbus.ChainSpec())
    assert params.chi == pytest.approx(1.2, rel=1e-6)
    t_star = qbus.transfer_time(params, 0.0, 4200.0)
    assert abs(t_star - 2094.4) < 0.5
    assert 0.0 in qbus.critical_times(params, 0.0, 4200.0)
    (on, off), = qbus.direct_steering_window(params, 1.0, 0.0, 0.0, 4200.0)
    assert abs(on - 1143.1) < 0.5 and abs(off - 3045.8) < 0.5
    assert qbus.threshold("separability", 10.0) == pytest.approx(math.log(21.0))


def test_effective_propagation_moves_entanglement():
    params = qbus.build_effective_params(qbus.ChainSpec())
    V0 = qbus.tmtss_cm(1.0)
    t_star = qbus.transfer_time(params, 0.0, 4200.0)
    V = qbus.propagate_effective(params, qbus.BathSpec(), V0, t_star)
    ac = qbus.extract_two_mode(V, qbus.MODE_A, qbus.MODE_C)
    assert qbus.log_negativity(ac) == pytest.approx(1.0, abs=0.01)


def test_run_scenario_tables():
    out = qbus.run_scenario("fig9", {"model": "effective", "time.t_max": 100, "time.n_points": 5})
    assert set(out) == {("effective", "bc"), ("effective", "ac")}
    table = out[("effective", "bc")]
    assert table.shape == (5, len(qbus.CSV_HEADER.split(",")))
    assert table[0, 0] == 0.0 and table[-1, 0] == 100.0


def test_errors_carry_the_key():
    with pytest.raises(qbus.QbusError, match="time.t_max"):
        qbus.run_analysis("fig3", {"time.t_max": -1})
    with pytest.raises(ValueError):
        qbus.log_negativity(0.1 * np.eye(4))
    assert "fig13_right" in qbus.preset_names()
