import numpy as np
import pytest

import tradeshock as ts


def test_fixture_baseline_reproduces_output():
    world = ts.fixture(seed=3, countries=4, sectors=3)
    base = ts.solve_baseline(world)
    assert base.converged
    assert base.iterations == 1
    np.testing.assert_allclose(base.output, world.recorded_output, rtol=1e-10)
    assert np.allclose(world.shares.sum(axis=0), 1.0, atol=1e-12)


def test_zero_tariff_matches_baseline():
    world = ts.fixture(seed=5, countries=3, sectors=2)
    base = ts.solve_baseline(world)
    tau = np.zeros((3, 3, 2))
    shocked = ts.solve(world, tau, baseline=base)
    np.testing.assert_allclose(shocked.output, base.output, rtol=1e-12)
    emp = ts.employment(world, base, shocked)
    assert abs(emp["total"][1]) < 1e-9


def test_uniform_tariff_contracts_output():
    world = ts.fixture(seed=8, countries=5, sectors=4)
    base = ts.solve_baseline(world)
    tau = np.full((5, 5, 4), 0.2)
    for c in range(5):
        tau[c, c, :] = 0.0
    shocked = ts.solve(world, tau, sigma=4.0, epsilon=-0.5, baseline=base)
    assert shocked.converged
    assert shocked.output.sum() < base.output.sum()
    assert shocked.final_demand.sum() < base.final_demand.sum()
    assert (shocked.price_delta >= 0).all()
    emp = ts.employment(world, base, shocked)
    assert emp["total"][1] < 0
    for k in range(4):
        pair = emp["labour_groups"][2 * k][2] + emp["labour_groups"][2 * k + 1][2]
        assert abs(pair - 100.0) <= 0.01


def test_builtin_scenarios_on_demo(demo_dir, tmp_path):
    world = ts.load_world(demo_dir)
    assert world.countries == ["USA", "CHN", "VNM"]
    scenarios = ts.builtin_scenarios()
    assert [s.name for s in scenarios] == ["scenario1", "scenario2", "scenario3"]
    tau, warnings = ts.resolve(scenarios[0], world)
    assert tau.shape == (3, 3, 2)
    assert tau[0, 2, 0] == pytest.approx(0.46)
    assert tau[0, 1, 1] == pytest.approx(0.50)
    assert len(warnings) == 1
    base = ts.solve_baseline(world)
    runs = []
    for s in scenarios:
        tau, _ = ts.resolve(s, world)
        shocked = ts.solve(world, tau, baseline=base)
        assert shocked.converged
        ts.write_report(tmp_path / s.name, world, base, shocked, s.name)
        runs.append(tmp_path / s.name)
    table = ts.compare(runs)
    assert "scenario1_jobs,scenario1_pct,scenario2_jobs" in table


def test_scenario_round_trip_and_errors():
    s = ts.parse_scenario('{"name": "x", "shocks": [{"importer": "USA", "exporter": "*", "rate": 0.1}]}')
    again = ts.parse_scenario(s.to_json())
    assert again.name == "x"
    with pytest.raises(ts.ScenarioError):
        ts.parse_scenario('{"name": "x", "shocks": [{"importer": "USA", "exporter": "*", "rate": -1}]}')
    world = ts.fixture(countries=2, sectors=2)
    with pytest.raises(ts.DimensionError):
        ts.solve(world, np.zeros((3, 3, 2)))


def test_fixture_written_and_validated(tmp_path):
    ts.fixture(seed=2, countries=3, sectors=2, out=tmp_path / "w")
    assert ts.validate(tmp_path / "w") == []
    world = ts.load_world(tmp_path / "w")
    assert world.size == 6
    assert len(world.fingerprint()) == 16
    with pytest.raises(ts.IoError):
        ts.load_world(tmp_path / "missing")
