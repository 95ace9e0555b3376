"""Batch experiment runner.

Subcommands::

    jumpctl calibrate --config cfg.json --out runs/x [--seed N]
    jumpctl simulate  --config cfg.json --out runs/x [--calibrate]
    jumpctl value     --config cfg.json --out runs/x [--calibrate]
    jumpctl toy       --config cfg.json --out runs/x
    jumpctl selfcheck --config cfg.json --out runs/x

Outputs land in the run directory: calibration.json, trajectories_<eta>.csv,
values.csv, toy.csv, selfcheck.json.  Every file embeds the tool version,
the config hash and the seed; identical config and seed reproduce identical
bytes.  CSV files start with one '#'-prefixed metadata line followed by the
header row.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, rng as rngmod
from .barrier import BarrierTable, build_table, default_p_min
from .calibration import (
    EstimationError,
    McConfig,
    calibrate_constants,
    make_bank,
)
from .config import ConfigError, RunConfig, eta_tag
from .control import barrier_path, running_sup_control
from .evaluate import event_grid, run_policy, report
from .paths import simulate_path
from .selfcheck import run_all
from .sensor import SensorSpec, observe
from .toy import toy_sweep

log = logging.getLogger("jumpctl")


def _meta(config: RunConfig) -> dict:
    return {
        "tool": "jumpctl",
        "version": __version__,
        "config_hash": config.hash(),
        "seed": config.seed,
    }


def _meta_line(config: RunConfig) -> str:
    return f"# jumpctl {__version__} config={config.hash()} seed={config.seed}"


def _write_csv(path: Path, config: RunConfig, header: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_meta_line(config) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _mc(config: RunConfig) -> McConfig:
    mc = config.raw["mc"]
    return McConfig(n_samples=mc["n_samples"], eps_trunc=mc["eps_trunc"], seed=mc["seed"])


# ---------------------------------------------------------------------------
# calibration document
# ---------------------------------------------------------------------------

def compute_calibration(config: RunConfig, p_min: float = None) -> dict:
    """Constants and one barrier table per configured sensor."""
    params = config.params()
    mc = _mc(config)
    bank = make_bank(params, mc)
    constants = calibrate_constants(params, mc, bank)
    grid_cfg = config.raw["grid"]
    lo = grid_cfg["p_min"]
    if lo is None:
        lo = default_p_min(params)
    if p_min is not None:
        lo = min(lo, p_min)
    tables = {}
    for eta in config.etas():
        tables[eta] = build_table(
            params, eta, constants, mc, bank,
            n_points=grid_cfg["n_points"], p_min=lo,
        )
    return {"constants": constants, "tables": tables, "params": params, "mc": mc}


def calibration_document(config: RunConfig, calib: dict) -> dict:
    c = calib["constants"]
    return {
        "meta": _meta(config),
        "cache_key": config.cache_key(),
        "constants": {
            "a": c.a,
            "b": c.b,
            "b_stderr": c.b_stderr,
            "delta": c.delta,
            "delta_stderr": c.delta_stderr,
            "m": c.m,
            "tail_bound": c.tail_bound,
        },
        "tables": [calib["tables"][eta].to_dict() for eta in config.etas()],
        "config": config.document(),
    }


def write_calibration(config: RunConfig, out: Path, calib: dict) -> Path:
    doc = calibration_document(config, calib)
    target = out / "calibration.json"
    target.write_text(json.dumps(doc, sort_keys=True, indent=1, allow_nan=False))
    return target


def load_calibration(config: RunConfig, out: Path) -> dict:
    """Load a cached calibration if its cache key matches the config."""
    target = out / "calibration.json"
    if not target.exists():
        return None
    doc = json.loads(target.read_text())
    if doc.get("cache_key") != config.cache_key():
        log.warning("calibration cache key mismatch; ignoring %s", target)
        return None
    params = config.params()
    tables = {}
    for td in doc["tables"]:
        table = BarrierTable.from_dict(td, params)
        tables[table.eta] = table
    from .calibration import Constants

    cd = doc["constants"]
    constants = Constants(
        a=cd["a"], b=cd["b"], delta=cd["delta"], m=cd["m"],
        b_stderr=cd["b_stderr"], delta_stderr=cd["delta_stderr"],
        tail_bound=cd.get("tail_bound", 0.0),
    )
    return {"constants": constants, "tables": tables, "params": params, "mc": _mc(config)}


def ensure_calibration(config: RunConfig, out: Path, allow_compute: bool, p_min=None) -> dict:
    calib = load_calibration(config, out)
    if calib is not None:
        return calib
    if not allow_compute:
        raise EstimationError(
            "no calibration cache in the run directory; pass --calibrate to compute it"
        )
    calib = compute_calibration(config, p_min=p_min)
    write_calibration(config, out, calib)
    return calib


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_calibrate(config: RunConfig, out: Path) -> int:
    calib = compute_calibration(config)
    target = write_calibration(config, out, calib)
    c = calib["constants"]
    log.info("calibrated: a=%.6g b=%.6g (+-%.2g) delta=%.6g -> %s",
             c.a, c.b, c.b_stderr, c.delta, target)
    return 0


def cmd_simulate(config: RunConfig, out: Path, allow_compute: bool = False) -> int:
    params = config.params()
    mc = _mc(config)
    gen = rngmod.stream(config.seed, rngmod.SCENARIO)
    path = simulate_path(params, params.horizon(mc.eps_trunc), gen)
    sums = np.cumsum(path.marks) if path.events else np.zeros(1)
    low = params.p_tilde + min(0.0, float(sums.min()))
    calib = ensure_calibration(config, out, allow_compute, p_min=low - 1.0)
    for eta in config.etas():
        table = calib["tables"][eta]
        obs = observe(path, SensorSpec(eta))
        L = barrier_path(obs, table)
        control = running_sup_control(L, params.c0)
        rows = [
            (
                0.0,
                params.p_tilde,
                params.p_tilde,
                L.l0,
                L.l0,
                params.c0,
                control.level_at(0.0, "at"),
                control.level_at(0.0, "right"),
                0,
            )
        ]
        for k, (t, _y) in enumerate(path.events):
            l_at, l_rt = L.entries[k][1], L.entries[k][2]
            rows.append(
                (
                    t,
                    obs.obs_at[k],
                    obs.post[k],
                    l_at,
                    l_rt,
                    control.level_at(t, "left"),
                    control.level_at(t, "at"),
                    control.level_at(t, "right"),
                    1 if obs.detected[k] else 0,
                )
            )
        _write_csv(
            out / f"trajectories_{eta_tag(eta)}.csv",
            config,
            ["time", "p_obs", "p_post", "L_at", "L_right", "C_left", "C_at", "C_right", "detected"],
            rows,
        )
    log.info("wrote %d trajectory files to %s", len(config.etas()), out)
    return 0


def cmd_value(config: RunConfig, out: Path, allow_compute: bool = False) -> int:
    params = config.params()
    mc = _mc(config)
    n_paths = config.raw["value"]["n_paths"]
    scen = make_bank(
        params,
        McConfig(
            n_samples=n_paths,
            eps_trunc=mc.eps_trunc,
            seed=mc.seed,
            stream=rngmod.VALUE_SWEEP,
        ),
    )
    low = params.p_tilde + min(
        0.0, float(scen.batch.s.min()) if scen.batch.n_events else 0.0
    )
    calib = ensure_calibration(config, out, allow_compute, p_min=low - 1.0)
    rows = []
    for eta in sorted(config.etas()):
        table = calib["tables"][eta]
        values = run_policy(scen.batch, event_grid(scen.batch, table, eta))
        direct = report(values, scen.batch)
        dual = report(values, scen.batch, use_closed=True)
        rows.append(
            (
                eta_tag(eta),
                table.regime,
                direct.total,
                direct.std_err,
                dual.total,
                dual.std_err,
            )
        )
    _write_csv(
        out / "values.csv",
        config,
        ["eta", "regime", "v_mc", "v_mc_se", "v_cf", "v_cf_se"],
        rows,
    )
    log.info("wrote value sweep (%d sensors) to %s", len(rows), out / "values.csv")
    return 0


def cmd_toy(config: RunConfig, out: Path) -> int:
    t = config.raw["toy"]
    rows = toy_sweep(t["lambda"], t["etas"], t["n_paths"], config.seed)
    _write_csv(out / "toy.csv", config, ["eta", "exact", "mc_mean", "mc_se"], rows)
    log.info("wrote toy sweep to %s", out / "toy.csv")
    return 0


def cmd_selfcheck(config: RunConfig, out: Path) -> int:
    params = config.params()
    mc = _mc(config)
    calib = ensure_calibration(config, out, allow_compute=True)
    verdict = run_all(params, calib["tables"], mc)
    doc = {"meta": _meta(config), **verdict}
    (out / "selfcheck.json").write_text(
        json.dumps(doc, sort_keys=True, indent=1, allow_nan=False)
    )
    for name, suite in verdict["suites"].items():
        log.info("selfcheck %-24s %s", name, "pass" if suite["pass"] else "FAIL")
    return 0 if verdict["pass"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="jumpctl", description=__doc__)
    parser.add_argument("command", choices=["calibrate", "simulate", "value", "toy", "selfcheck"])
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--out", type=Path, default=None, help="run directory override")
    parser.add_argument("--n-samples", type=int, default=None, help="MC sample override")
    parser.add_argument(
        "--calibrate",
        action="store_true",
        help="compute calibration on the fly when the cache is missing",
    )
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.config:
            config = RunConfig.from_file(
                args.config, seed=args.seed, out_dir=args.out, n_samples=args.n_samples
            )
        else:
            config = RunConfig.load(
                None, seed=args.seed, out_dir=args.out, n_samples=args.n_samples
            )
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return 2

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "calibrate":
            return cmd_calibrate(config, out)
        if args.command == "simulate":
            return cmd_simulate(config, out, allow_compute=args.calibrate)
        if args.command == "value":
            return cmd_value(config, out, allow_compute=args.calibrate)
        if args.command == "toy":
            return cmd_toy(config, out)
        return cmd_selfcheck(config, out)
    except EstimationError as exc:
        diagnostic = {"meta": _meta(config), "error": str(exc), "command": args.command}
        (out / "diagnostic.json").write_text(json.dumps(diagnostic, sort_keys=True, indent=1))
        log.error("estimation failure: %s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
