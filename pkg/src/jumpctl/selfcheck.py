"""Invariant suites behind the selfcheck command.

Exact suites (integration identities, truncation convergence, control
monotonicity) must hold with equality; statistical suites (projection
identity, dual value identity) are gated at three standard errors of the
paired difference; table suites allow three-standard-error noise bands.
"""

from __future__ import annotations

import math
from typing import Dict, List

import numpy as np

from . import rng as rngmod
from .barrier import OPTIONAL, PREDICTABLE, BarrierTable
from .calibration import McConfig, SampleBank, make_bank
from .control import barrier_path, running_sup_control
from .evaluate import event_grid, paired_se, run_policy, true_reward
from .fixtures import (
    random_fubini_fixture,
    random_integrator,
    random_rc_step_path,
    random_step_path,
)
from .integral import (
    cs_integral,
    fubini_check,
    lower_star_integral,
    star_integral,
    truncate_control,
    value_of_control,
)
from .paths import ModelParams, simulate_path
from .sensor import SensorSpec, observe


def suite_fubini(n: int = 200, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    bad = sum(0 if fubini_check(*random_fubini_fixture(rng)) else 1 for _ in range(n))
    return {"pass": bad == 0, "n": n, "failures": bad}


def suite_cs_identity(n: int = 100, seed: int = 1) -> dict:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n):
        phi = random_rc_step_path(rng)
        A = random_integrator(rng, with_ramp=bool(rng.integers(0, 2)))
        if cs_integral(phi, A, 5.0) != star_integral(phi.left_limits(), A, 5.0):
            bad += 1
    return {"pass": bad == 0, "n": n, "failures": bad}


def suite_envelope_order(n: int = 200, seed: int = 2) -> dict:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n):
        phi = random_step_path(rng)
        A = random_integrator(rng)
        if lower_star_integral(phi, A, 5.0) > star_integral(phi, A, 5.0):
            bad += 1
    return {"pass": bad == 0, "n": n, "failures": bad}


def shape_bands(g: np.ndarray, v: np.ndarray, se: np.ndarray) -> tuple:
    """(monotone, concave) within three-standard-error noise bands.

    Concavity is checked through divided differences, which stays exact for
    linear columns on non-uniform grids.
    """
    eps = 1e-9
    mono = bool(
        (np.diff(v) >= -3.0 * np.sqrt(se[:-1] ** 2 + se[1:] ** 2) - eps).all()
    )
    h = np.diff(g)
    slopes = np.diff(v) / h
    slope_se = np.sqrt(se[:-1] ** 2 + se[1:] ** 2) / h
    conc = bool(
        (
            np.diff(slopes)
            <= 3.0 * np.sqrt(slope_se[:-1] ** 2 + slope_se[1:] ** 2) + eps
        ).all()
    )
    return mono, conc


def suite_barrier_shape(tables: List[BarrierTable]) -> dict:
    """Monotone and concave columns within noise bands; order ell0 < ell1 < 0."""
    failures = []
    for table in tables:
        below = table.grid < table.constants.b
        for delta, col, se in ((0, table.ell0, table.ell0_se), (1, table.ell1, table.ell1_se)):
            if table.regime == OPTIONAL and delta == 0:
                keep = below & np.isfinite(col)
            else:
                keep = below
            g, v, e = table.grid[keep], col[keep], se[keep]
            if len(v) < 3:
                continue
            mono_ok, conc_ok = shape_bands(g, v, e)
            if not mono_ok:
                failures.append(f"{table.regime}/eta={table.eta}: ell{delta} not monotone")
            if not conc_ok:
                failures.append(f"{table.regime}/eta={table.eta}: ell{delta} not concave")
        if table.regime not in (OPTIONAL, PREDICTABLE):
            keep = below
            band = 3.0 * np.sqrt(table.ell0_se[keep] ** 2 + table.ell1_se[keep] ** 2)
            if not (table.ell0[keep] <= table.ell1[keep] + band).all():
                failures.append(f"{table.regime}/eta={table.eta}: ell0 > ell1 below b")
            if not (table.ell1[keep] <= 3.0 * table.ell1_se[keep] + 1e-12).all():
                failures.append(f"{table.regime}/eta={table.eta}: ell1 not negative below b")
    return {"pass": not failures, "failures": failures}


def suite_control_monotone(
    params: ModelParams, tables: List[BarrierTable], seed: int, n: int = 120
) -> dict:
    gen = rngmod.stream(seed, "selfcheck")
    bad = []
    per_table = max(n // max(len(tables), 1), 1)
    for table in tables:
        for _ in range(per_table):
            path = simulate_path(params, params.horizon(), gen)
            obs = observe(path, SensorSpec(table.eta))
            control = running_sup_control(barrier_path(obs, table), params.c0)
            run = control.c0
            for (t, left, at, right) in control.breakpoints:
                if not (run <= left <= at <= right):
                    bad.append(f"eta={table.eta} t={t}")
                run = right
    return {"pass": not bad, "failures": bad[:5]}


def suite_truncation(
    params: ModelParams, table: BarrierTable, seed: int, n: int = 50
) -> dict:
    """V(C wedge n) reaches V(C) exactly once the cap clears the control."""
    gen = rngmod.stream(seed, "selfcheck")
    bad = 0
    for _ in range(n):
        path = simulate_path(params, params.horizon(), gen)
        obs = observe(path, SensorSpec(table.eta))
        control = running_sup_control(barrier_path(obs, table), params.c0)
        v = value_of_control(path, obs, control, params)
        for cap in (control.terminal, control.terminal + 5.0):
            if value_of_control(path, obs, truncate_control(control, cap), params) != v:
                bad += 1
                break
    return {"pass": bad == 0, "n": n, "failures": bad}


def suite_projection_identity(
    bank: SampleBank, tables: Dict[float, BarrierTable]
) -> dict:
    """MC means of the true-reward and observable-reward integrals agree."""
    results = {}
    ok = True
    for eta, table in tables.items():
        if math.isinf(eta) or eta <= 0:
            continue
        grid = event_grid(bank.batch, table, eta)
        proj = run_policy(bank.batch, grid)
        true = run_policy(bank.batch, true_reward(grid))
        gap = float(np.mean(true.reward - proj.reward))
        se = paired_se(true.reward, proj.reward)
        results[str(eta)] = {"gap": gap, "se": se}
        ok = ok and abs(gap) <= 3.0 * se + 1e-9
    return {"pass": ok, "results": results}


def suite_dual_value(bank: SampleBank, tables: Dict[float, BarrierTable]) -> dict:
    """MC means of the direct and dual value forms agree per sensor."""
    results = {}
    ok = True
    for eta, table in tables.items():
        values = run_policy(bank.batch, event_grid(bank.batch, table, eta))
        gap = float(np.mean(values.total - values.closed))
        se = paired_se(values.total, values.closed)
        results["inf" if math.isinf(eta) else str(eta)] = {"gap": gap, "se": se}
        ok = ok and abs(gap) <= 3.0 * se + 1e-9
    return {"pass": ok, "results": results}


def run_all(
    params: ModelParams,
    tables: Dict[float, BarrierTable],
    mc: McConfig,
    n_paths: int = 20_000,
) -> dict:
    table_list = list(tables.values())
    bank = make_bank(
        params,
        McConfig(
            n_samples=n_paths, eps_trunc=mc.eps_trunc, seed=mc.seed, stream="selfcheck"
        ),
    )
    suites = {
        "fubini": suite_fubini(seed=mc.seed),
        "cs_identity": suite_cs_identity(seed=mc.seed + 1),
        "envelope_order": suite_envelope_order(seed=mc.seed + 2),
        "barrier_monotonicity": suite_barrier_shape(table_list),
        "control_monotonicity": suite_control_monotone(params, table_list, mc.seed),
        "truncation_convergence": suite_truncation(params, table_list[0], mc.seed),
        "projection_identity": suite_projection_identity(bank, tables),
        "dual_value_identity": suite_dual_value(bank, tables),
    }
    return {"pass": all(s["pass"] for s in suites.values()), "suites": suites}
