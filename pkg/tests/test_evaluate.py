"""Batch valuation against the per-path reference operations."""

import math

import numpy as np
import pytest

from jumpctl import (
    McConfig,
    SensorSpec,
    barrier_path,
    cadlag_approximation,
    closed_form_value,
    make_bank,
    observe,
    running_sup_control,
    value_of_control,
)
from jumpctl.evaluate import (
    delayed_one_event,
    event_grid,
    no_trade,
    paired_se,
    relaxation_values,
    report,
    right_jump_only,
    run_policy,
    shifted,
    true_reward,
)


@pytest.fixture(scope="module")
def scen(illustration_params):
    return make_bank(
        illustration_params,
        McConfig(n_samples=300, seed=77, stream="scenario"),
    )


@pytest.mark.parametrize("eta", [0.0, 3.0, math.inf])
def test_batch_matches_per_path_ops(scen, tables_small, illustration_params, eta):
    table = tables_small[eta]
    grid = event_grid(scen.batch, table, eta)
    values = run_policy(scen.batch, grid)
    for i in range(0, scen.n, 7):
        path = scen.batch.path(i)
        obs = observe(path, SensorSpec(eta))
        control = running_sup_control(barrier_path(obs, table), illustration_params.c0)
        v = value_of_control(path, obs, control, illustration_params)
        cf = closed_form_value(path, control, illustration_params)
        assert values.total[i] == pytest.approx(v, rel=1e-10, abs=1e-10)
        assert values.closed[i] == pytest.approx(cf, rel=1e-10, abs=1e-10)


def test_relaxation_matches_per_path_ops(scen, tables_small, illustration_params):
    table = tables_small[3.0]
    grid = event_grid(scen.batch, table, 3.0)
    v, v_tilde = relaxation_values(scen.batch, grid, k=50)
    values = run_policy(scen.batch, grid)
    np.testing.assert_allclose(v, values.total, rtol=1e-10, atol=1e-10)
    for i in range(0, scen.n, 11):
        path = scen.batch.path(i)
        obs = observe(path, SensorSpec(3.0))
        control = running_sup_control(barrier_path(obs, table), illustration_params.c0)
        ref = value_of_control(
            path, obs, cadlag_approximation(control, 50), illustration_params
        )
        assert v_tilde[i] == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_no_trade_variant_is_constant_control(scen, tables_small, illustration_params):
    grid = event_grid(scen.batch, tables_small[3.0], 3.0)
    values = run_policy(scen.batch, no_trade(grid))
    assert (values.reward == 0.0).all()
    c0 = illustration_params.c0
    # risk of the frozen position: c0^2/2 times the clock mass per path
    per_path_clock = np.zeros(scen.n)
    np.add.at(
        per_path_clock,
        np.repeat(np.arange(scen.n), np.diff(scen.batch.offsets)),
        scen.batch.disc,
    )
    np.testing.assert_allclose(values.risk, c0 * c0 / 2.0 * per_path_clock, rtol=1e-12)


def test_variants_are_dominated(scen, tables_small):
    grid = event_grid(scen.batch, tables_small[3.0], 3.0)
    base = run_policy(scen.batch, grid).total.mean()
    for variant in (
        shifted(grid, 0.25),
        shifted(grid, -0.25),
        no_trade(grid),
        right_jump_only(grid),
        delayed_one_event(scen.batch, grid),
    ):
        other = run_policy(scen.batch, variant).total.mean()
        assert other <= base + 0.3  # small samples: generous slack


def test_true_reward_equals_projected_for_adapted_controls(scen, tables_small):
    grid = event_grid(scen.batch, tables_small[3.0], 3.0)
    proj = run_policy(scen.batch, grid)
    true = run_policy(scen.batch, true_reward(grid))
    # adapted moves never sit at undetected jumps: pathwise equality
    np.testing.assert_allclose(true.reward, proj.reward, rtol=1e-10, atol=1e-12)


def test_per_path_value_rows_export(tmp_path, scen, tables_small):
    values = run_policy(scen.batch, event_grid(scen.batch, tables_small[3.0], 3.0))
    target = tmp_path / "values_rows.csv"
    values.write_csv(target)
    lines = target.read_text().splitlines()
    assert lines[0] == "path_id,reward_term,risk_term,total"
    cells = lines[1].split(",")
    assert int(cells[0]) == 0
    assert float(cells[3]) == pytest.approx(float(cells[1]) - float(cells[2]))
    assert len(lines) == scen.n + 1


def test_report_fields(scen, tables_small):
    grid = event_grid(scen.batch, tables_small[0.0], 0.0)
    values = run_policy(scen.batch, grid)
    rep = report(values, scen.batch)
    assert rep.total == pytest.approx(rep.reward_term - rep.risk_term)
    assert rep.n_paths == scen.n
    assert rep.std_err > 0
    assert 0 < rep.tail_bound < 1e-4
    assert paired_se(values.total, values.closed) >= 0
