"""Warm-up linear control problem on the unit horizon.

Maximize the expected integral of a bounded control against an undiscounted
compound Poisson path with uniform(-1, 1) marks.  Acting on detected jumps
with their sign is optimal among sensor-measurable controls and earns
lam (1 - eta^2) / 2; any pre-committed (predictable) action earns zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .calibration import McEstimate

HORIZON = 1.0


@dataclass(frozen=True)
class ToyConfig:
    """Sweep configuration; the mark law is fixed to uniform(-1, 1)."""

    lam: float = 0.5
    eta: float = 0.0
    n_paths: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")


def toy_value_exact(lam: float, eta: float) -> float:
    """lam (1 - eta^2) / 2 for eta in [0, 1]."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1] for the closed form")
    return lam * (1.0 - eta * eta) / 2.0


def _payoffs(config: ToyConfig, rng: np.random.Generator) -> np.ndarray:
    """Per-path payoff of the sign-on-detection action: sum |y| 1{|y| >= eta}."""
    counts = rng.poisson(config.lam * HORIZON, config.n_paths)
    total = int(counts.sum())
    marks = rng.uniform(-1.0, 1.0, total)
    gain = np.abs(marks)
    gain[gain < config.eta] = 0.0
    out = np.zeros(config.n_paths)
    if total:
        pid = np.repeat(np.arange(config.n_paths), counts)
        np.add.at(out, pid, gain)
    return out


def toy_value_mc(config: ToyConfig, rng: np.random.Generator = None) -> McEstimate:
    """Monte Carlo value of the sign-on-detection action."""
    gen = rng if rng is not None else rngmod.stream(config.seed, rngmod.TOY)
    payoff = _payoffs(config, gen)
    n = config.n_paths
    se = float(payoff.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(float(payoff.mean()), se, n)


def toy_sweep(lam: float, etas, n_paths: int, seed: int) -> list:
    """Rows (eta, exact, mc_mean, mc_se) for a threshold sweep."""
    rows = []
    gen = rngmod.stream(seed, rngmod.TOY)
    for eta in etas:
        est = toy_value_mc(ToyConfig(lam, eta, n_paths, seed), gen)
        rows.append((eta, toy_value_exact(lam, eta), est.mean, est.std_err))
    return rows
