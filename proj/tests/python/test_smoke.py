import math

import numpy as np
import pytest

import rrmc

PUT = {
    "product": {"type": "put"},
    "basis": "constant-linear-quadratic",
    "paths": 5000,
    "test_paths": 5000,
    "outer_paths": 50,
    "inner_paths": 50,
    "seed": 3,
}


def test_version():
    assert rrmc.__version__.count(".") == 2


def test_run_experiment_brackets_lattice():
    report = rrmc.run_experiment(PUT)
    lower = report["bounds"]["lower"]
    upper = report["bounds"]["upper"]
    truth = rrmc.lattice_price(100, 100, 0.05, 0.0, 0.2, 1.0, 4)
    assert lower["value"] <= truth + 3 * lower["std_error"]
    assert upper["value"] >= truth - 3 * upper["std_error"]
    assert report["model"]["format"] == "rrmc.continuation_model"
    assert len(report["model"]["coefficients"]) == 3


def test_reports_are_reproducible():
    a = rrmc.run_experiment(PUT)
    b = rrmc.run_experiment(PUT)
    a.pop("timings")
    b.pop("timings")
    assert a == b


def test_continuation_value_matches_terminal_convention():
    cfg = dict(PUT, outer_paths=0)
    model = rrmc.run_experiment(cfg)["model"]
    assert rrmc.continuation_value(model, cfg, [95.0], 4) == 0.0
    assert rrmc.continuation_value(model, cfg, [80.0], 1) > 0.0


def test_simulate_shape_and_determinism():
    cfg = {"product": {"type": "max-call", "dim": 3}}
    x = rrmc.simulate(cfg, 100, 7)
    assert x.shape == (100, 10, 3)
    assert np.all(x[:, 0, :] == 100.0)
    np.testing.assert_array_equal(x, rrmc.simulate(cfg, 100, 7))
    assert not np.array_equal(x, rrmc.simulate(cfg, 100, 7, domain="test"))


def test_least_squares():
    rng = np.random.default_rng(0)
    design = rng.standard_normal((200, 4))
    truth = np.array([1.0, -2.0, 0.5, 3.0])
    gamma, diag = rrmc.solve_least_squares(design, design @ truth)
    np.testing.assert_allclose(gamma, truth, rtol=1e-10)
    assert diag["rank"] == 4


def test_costs():
    assert rrmc.max_call_cost_reduction(10, 9) == pytest.approx(29 / 110)
    cost = rrmc.cost_report({"product": {"dim": 10}})
    assert cost["K"] == 66 and cost["K_r"] == 11


def test_lattice_european_limit():
    lattice = rrmc.lattice_price(100, 100, 0.05, 0.0, 0.2, 1.0, 1)
    assert math.isclose(lattice, rrmc.black_scholes(100, 100, 0.05, 0.0, 0.2, 1.0), abs_tol=1e-4)


def test_errors():
    with pytest.raises(rrmc.ConfigError):
        rrmc.normalize_config({"pathz": 1})
    with pytest.raises(ValueError):
        rrmc.run_experiment("{not json")
    with pytest.raises(rrmc.NumericalError):
        rrmc.run_experiment({"product": {"dim": 3, "rho": -0.9}, "paths": 10, "test_paths": 10})


def test_table():
    table = rrmc.run_table(dict(PUT, outer_paths=0), [{"method": "standard-tvr"}, {"basis": "swap-order-stats"}])
    assert [c["status"] for c in table["cells"]] == ["ok", "failed"]
    assert table["csv"].startswith("product,d,rho")
