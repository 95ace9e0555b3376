"""Acceptance gate: one test per criterion, tolerances pinned.

Statistical gates run at 1e5 samples; "combined SE" always means the root
sum of squares of the two estimates' standard errors.  Each test prints one
pass line with the measured quantities (run with -s to see them live).
"""

import json
import math

import numpy as np
import pytest

from jumpctl import (
    McConfig,
    ModelParams,
    build_table,
    calibrate_constants,
    compute_b,
    compute_b_running_sup,
    discrete_law,
    gaussian_mixture_law,
    make_bank,
    optional_barrier,
    sensor_barrier,
    sensor_constants,
    toy_value_exact,
    toy_value_mc,
    ToyConfig,
)
from jumpctl import rng as rngmod
from jumpctl.barrier import OPTIONAL
from jumpctl.calibration import EstimationError
from jumpctl.cli import main
from jumpctl.evaluate import (
    delayed_one_event,
    event_grid,
    no_trade,
    relaxation_values,
    report,
    right_jump_only,
    run_policy,
    shifted,
    true_reward,
)
from jumpctl.fixtures import (
    random_fubini_fixture,
    random_integrator,
    random_rc_step_path,
    random_step_path,
)
from jumpctl.integral import (
    cs_integral,
    fubini_sides,
    lower_star_integral,
    star_integral,
)
from jumpctl.selfcheck import shape_bands, suite_truncation

ACC_SEED = 20260811
N_FULL = 100_000


def _ok(name: str, detail: str) -> None:
    print(f"[acceptance] {name}: PASS  ({detail})")


@pytest.fixture(scope="module")
def params():
    law = gaussian_mixture_law([(0.5, -3.0, 2.0), (0.5, 6.0, 2.0)])
    return ModelParams(p_tilde=-10.0, r=1.0, lam=0.5, c0=-12.0, law=law)


@pytest.fixture(scope="module")
def mc_full():
    return McConfig(n_samples=N_FULL, seed=ACC_SEED)


@pytest.fixture(scope="module")
def bank_full(params, mc_full):
    return make_bank(params, mc_full)


@pytest.fixture(scope="module")
def consts_full(params, mc_full, bank_full):
    return calibrate_constants(params, mc_full, bank_full)


@pytest.fixture(scope="module")
def tables_full(params, mc_full, bank_full, consts_full):
    return {
        eta: build_table(params, eta, consts_full, mc_full, bank_full)
        for eta in (0.0, 3.0, 6.0, math.inf)
    }


@pytest.fixture(scope="module")
def value_bank(params, mc_full):
    return make_bank(
        params,
        McConfig(n_samples=N_FULL, seed=ACC_SEED, stream=rngmod.VALUE_SWEEP),
    )


def test_criterion_01_toy_value():
    lam = 0.5
    details = []
    for eta in (0.0, 0.3, 0.5, 0.7, 1.0):
        est = toy_value_mc(ToyConfig(lam=lam, eta=eta, n_paths=N_FULL, seed=ACC_SEED))
        exact = toy_value_exact(lam, eta)
        assert abs(est.mean - exact) <= 3 * est.std_err + 1e-12
        details.append(f"eta={eta}: {est.mean:.4f}~{exact:.4f}")
    assert toy_value_exact(lam, 0.0) == 0.25
    _ok("criterion 1 (toy value)", "; ".join(details))


def test_criterion_02_constant_b(params, mc_full, bank_full, consts_full):
    assert abs(consts_full.b - 1.37642) <= 0.05
    unit = ModelParams(0.0, 1.0, 1.0, 0.0, discrete_law([(1.0, 1.0)]))
    b_up, _ = compute_b(unit, mc_full)
    assert abs(b_up.mean - 1.0) <= 3 * b_up.std_err
    down = ModelParams(0.0, 1.0, 1.0, 0.0, discrete_law([(-1.0, 1.0)]))
    b_dn, _ = compute_b(down, mc_full)
    assert b_dn.mean == 0.0
    _ok(
        "criterion 2 (constant b)",
        f"b={consts_full.b:.5f}+-{consts_full.b_stderr:.5f} vs 1.37642; "
        f"unit b={b_up.mean:.4f}; down b={b_dn.mean}",
    )


def test_criterion_03_two_b_representations(params, mc_full, bank_full):
    b1, _ = compute_b(params, mc_full, bank_full)
    check = McConfig(n_samples=N_FULL, seed=ACC_SEED, stream=rngmod.CALIBRATION_CHECK)
    b2 = compute_b_running_sup(params, check)
    combined = math.hypot(b1.std_err, b2.std_err)
    assert abs(b1.mean - b2.mean) <= 3 * combined
    _ok(
        "criterion 3 (two b representations)",
        f"{b1.mean:.5f} vs {b2.mean:.5f}, 3*combined={3*combined:.5f}",
    )


def test_criterion_04_barrier_shape(params, mc_full, bank_full, consts_full):
    b = consts_full.b
    for eta in (3.0, 6.0):
        table = build_table(
            params, eta, consts_full, mc_full, bank_full,
            n_points=51, p_min=b - 20.0,
        )
        below = table.grid < b
        for delta, col, se in ((0, table.ell0, table.ell0_se), (1, table.ell1, table.ell1_se)):
            mono, conc = shape_bands(table.grid[below], col[below], se[below])
            assert mono, f"eta={eta} delta={delta} not monotone"
            assert conc, f"eta={eta} delta={delta} not concave"
        band = 3 * np.hypot(table.ell0_se[below], table.ell1_se[below])
        assert (table.ell0[below] <= table.ell1[below] + band).all()
        assert (table.ell1[below] <= 3 * table.ell1_se[below] + 1e-9).all()
        for x in (0.0, 0.5, 2.0, 10.0):
            assert table.value(b + x, 0) == pytest.approx(consts_full.a * x)
            assert table.value(b + x, 1) == 0.0
    _ok("criterion 4 (barrier shape)", "eta in {3, 6}: 51-point grids below b")


def test_criterion_05_regime_limits(mc_full):
    # all marks below the threshold: the sensor formulas give back the line
    params = ModelParams(0.0, 1.0, 1.0, 0.0, discrete_law([(1.0, 0.6), (-1.0, 0.4)]))
    bank = make_bank(params, mc_full)
    consts = calibrate_constants(params, mc_full, bank)
    table = build_table(params, 2.0, consts, mc_full, bank, n_points=50)
    assert table.p_eta == 1.0
    below = table.grid < consts.b
    line = consts.a * (table.grid[below] - consts.b)
    assert (np.abs(table.ell0[below] - line) <= 3 * table.ell0_se[below] + 1e-9).all()

    # all marks detected: the sensor machinery reduces to the perfect-sensor
    # formulas (routed exactly), and a nearly-perfect sensor agrees within MC
    routed = build_table(params, 0.5, consts, mc_full, bank, n_points=50)
    assert routed.regime == OPTIONAL
    with pytest.raises(EstimationError):
        sensor_constants(params, 0.5, consts.delta)

    near = ModelParams(
        0.0, 1.0, 1.0, 0.0,
        discrete_law([(1.0, 0.49), (-1.0, 0.49), (0.1, 0.01), (-0.1, 0.01)]),
    )
    nbank = make_bank(near, mc_full)
    nconsts = calibrate_constants(near, mc_full, nbank)
    sc = sensor_constants(near, 0.5, nconsts.delta)
    assert sc.p_eta == pytest.approx(0.02)
    frontier = nconsts.m * near.lam / near.r
    lo = max(frontier, 0.0) + 0.1 * (nconsts.b - max(frontier, 0.0))
    for p in np.linspace(lo, nconsts.b - 0.05, 5):
        sens = sensor_barrier(float(p), 0, near, 0.5, nconsts, sc, mc_full, nbank)
        opt = optional_barrier(float(p), 0, near, nconsts, mc_full, nbank)
        combined = math.hypot(sens.std_err, opt.std_err)
        assert abs(sens.mean - opt.mean) <= 3 * combined + 1e-9
    _ok(
        "criterion 5 (regime limits)",
        "p_eta=1 reduces to the line; p_eta=0 routes to the perfect sensor; "
        "p_eta=0.02 agrees with it within 3*SE at 5 levels",
    )


def test_criterion_06_dual_value_identity(params, tables_full, value_bank):
    details = []
    for eta, table in tables_full.items():
        values = run_policy(value_bank.batch, event_grid(value_bank.batch, table, eta))
        direct = report(values, value_bank.batch)
        dual = report(values, value_bank.batch, use_closed=True)
        combined = math.hypot(direct.std_err, dual.std_err)
        assert abs(direct.total - dual.total) <= 3 * combined
        details.append(f"eta={eta}: {direct.total:.3f}~{dual.total:.3f}")
    _ok("criterion 6 (dual value identity)", "; ".join(details))


def test_criterion_07_optimality_dominance(params, tables_full, value_bank):
    details = []
    for eta in (0.0, 3.0):
        grid = event_grid(value_bank.batch, tables_full[eta], eta)
        base_values = run_policy(value_bank.batch, grid)
        base = report(base_values, value_bank.batch)
        variants = {
            "shift+0.25": shifted(grid, 0.25),
            "shift-0.25": shifted(grid, -0.25),
            "delayed": delayed_one_event(value_bank.batch, grid),
            "no-trade": no_trade(grid),
            "right-only": right_jump_only(grid),
        }
        for name, variant in variants.items():
            other = report(run_policy(value_bank.batch, variant), value_bank.batch)
            combined = math.hypot(base.std_err, other.std_err)
            assert base.total >= other.total - 3 * combined, (eta, name)
            details.append(f"eta={eta} {name}: {base.total:.2f}>={other.total:.2f}")
    _ok("criterion 7 (optimality dominance)", "; ".join(details))


def test_criterion_08_value_sweep(params, mc_full, bank_full, consts_full, value_bank):
    etas = [0.0, 1.5, 3.0, 4.5, 6.0, 7.5, 9.0, 12.0]
    results = {}
    for eta in etas + [math.inf]:
        table = build_table(params, eta, consts_full, mc_full, bank_full)
        values = run_policy(value_bank.batch, event_grid(value_bank.batch, table, eta))
        results[eta] = report(values, value_bank.batch)
    v0, vinf = results[0.0], results[math.inf]
    assert abs(v0.total - (-22.0)) <= 2.0
    assert abs(vinf.total - (-33.0)) <= 3.0
    for a, b in zip(etas, etas[1:]):
        band = 3 * math.hypot(results[a].std_err, results[b].std_err)
        assert results[b].total <= results[a].total + band
    _ok(
        "criterion 8 (value sweep)",
        f"v(0)={v0.total:.2f} (target -22+-2); v(inf)={vinf.total:.2f} "
        f"(target -33+-3); nonincreasing over {etas}",
    )


def test_criterion_09_integral_suite(params, tables_full):
    rng = np.random.default_rng(ACC_SEED)
    for _ in range(200):
        fixture, A = random_fubini_fixture(rng)
        lhs_i, rhs_i, lhs_ii, rhs_ii = fubini_sides(fixture, A)
        assert lhs_i == rhs_i and lhs_ii == rhs_ii
    for _ in range(100):
        phi = random_rc_step_path(rng)
        A = random_integrator(rng, with_ramp=bool(rng.integers(0, 2)))
        assert cs_integral(phi, A, 6.0) == star_integral(phi.left_limits(), A, 6.0)
    for _ in range(200):
        phi = random_step_path(rng)
        A = random_integrator(rng)
        assert lower_star_integral(phi, A, 6.0) <= star_integral(phi, A, 6.0)
    trunc = suite_truncation(params, tables_full[3.0], ACC_SEED, n=100)
    assert trunc["pass"]
    _ok(
        "criterion 9 (integral suite)",
        "200 Fubini exact; 100 CS exact; envelopes ordered; truncation exact",
    )


def test_criterion_10_projection_identity(params, tables_full, value_bank):
    details = []
    for eta in (3.0, 6.0):
        grid = event_grid(value_bank.batch, tables_full[eta], eta)
        proj = report(run_policy(value_bank.batch, grid), value_bank.batch)
        true = report(run_policy(value_bank.batch, true_reward(grid)), value_bank.batch)
        combined = math.hypot(proj.std_err, true.std_err)
        assert abs(proj.total - true.total) <= 3 * combined + 1e-9
        details.append(f"eta={eta}: gap={proj.total - true.total:.2e}")
    _ok("criterion 10 (projection identity)", "; ".join(details))


def test_criterion_11_relaxation(params, tables_full, value_bank):
    details = []
    for eta in (0.0, 3.0):
        grid = event_grid(value_bank.batch, tables_full[eta], eta)
        v, v_tilde = relaxation_values(value_bank.batch, grid, k=100)
        n = len(v)
        se_v = v.std(ddof=1) / math.sqrt(n)
        se_t = v_tilde.std(ddof=1) / math.sqrt(n)
        combined = math.hypot(se_v, se_t)
        assert abs(v.mean() - v_tilde.mean()) <= 3 * combined
        details.append(
            f"eta={eta}: V={v.mean():.3f}, V~={v_tilde.mean():.3f}, 3SE={3*combined:.3f}"
        )
    _ok("criterion 11 (relaxation)", "; ".join(details))


def test_criterion_12_determinism(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(
        json.dumps(
            {
                "mc": {"n_samples": 3_000, "seed": ACC_SEED},
                "grid": {"n_points": 50, "p_min": None},
            }
        )
    )
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["calibrate", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        outs.append(out)
    a, b = outs
    assert (a / "calibration.json").read_bytes() == (b / "calibration.json").read_bytes()
    names = sorted(f.name for f in a.glob("trajectories_*.csv"))
    assert names
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    _ok("criterion 12 (determinism)", f"calibration.json and {len(names)} CSVs byte-identical")
