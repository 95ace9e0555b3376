"""Investment barriers for the three information regimes.

The barrier ell(p, flag) is the lowest position the controller tolerates when
the observable reward level is p and the observable jump indicator is flag.
Above the critical level b it is known in closed form; below b it is the
infimum of the hitting-time functional over admissible thresholds, estimated
on the calibration bank and tabulated on a p-grid with linear interpolation
between grid points.

Known sign subtlety: in the perfect-sensor regime, the barrier at a jump
below b is (r/(lam+r)) * (p - b), i.e. negative below b.  The source
characterization prints the reversed difference in one display, but the
convergence analysis, monotonicity, and the requirement that the barrier be
negative below b all pin down the sign used here.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calibration import (
    Constants,
    McConfig,
    McEstimate,
    SampleBank,
    SensorConstants,
    hitting_functional,
    make_bank,
    optional_functional,
    sensor_constants,
)
from .paths import ModelParams
from .sensor import failure_prob

logger = logging.getLogger("jumpctl.barrier")

#: Absorbing sentinel: never raises a running maximum, never enters sums.
NEG_INF = float("-inf")

PREDICTABLE = "predictable"
SENSOR = "sensor"
OPTIONAL = "optional"


def resolve_regime(params: ModelParams, eta: float) -> str:
    """Information regime implied by a sensor threshold under a mark law."""
    if math.isinf(eta):
        return PREDICTABLE
    if failure_prob(params.law, eta) == 0.0:
        return OPTIONAL
    return SENSOR


# ---------------------------------------------------------------------------
# point operations
# ---------------------------------------------------------------------------

def predictable_barrier(p: float, constants: Constants) -> float:
    """No-sensor barrier: a * (p - b), exact given the constants."""
    return constants.a * (p - constants.b)


def sensor_barrier(
    p: float,
    delta: int,
    params: ModelParams,
    eta: float,
    constants: Constants,
    sens: SensorConstants,
    mc: McConfig,
    bank: Optional[SampleBank] = None,
) -> McEstimate:
    """Barrier under an imperfect sensor (0 < p_eta), MC below b.

    delta = 1: observable jump at the query instant; the infimum runs over
    the undetected threshold in (0, B0 (b - p)).  delta = 0: no observable
    jump; the infimum runs over the detected threshold in (-B1 (b - p), 0).
    """
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    b = constants.b
    if p >= b:
        exact = 0.0 if delta == 1 else constants.a * (p - b)
        return McEstimate(exact, 0.0, 0)
    bank = bank if bank is not None else make_bank(params, mc)
    lam_over_r = params.lam / params.r
    if delta == 1:
        pieces = bank.pieces(eta, "gamma0")
        _, gamma_star, _ = pieces.minimize(p, 1, lam_over_r, 0.0, sens.B0 * (b - p))
        return hitting_functional(gamma_star, 0.0, eta, 1, p, params, mc, bank)
    pieces = bank.pieces(eta, "gamma1")
    _, gamma_star, _ = pieces.minimize(p, 0, lam_over_r, -sens.B1 * (b - p), 0.0)
    return hitting_functional(0.0, gamma_star, eta, 0, p, params, mc, bank)


def optional_barrier(
    p: float,
    delta: int,
    params: ModelParams,
    constants: Constants,
    mc: McConfig,
    bank: Optional[SampleBank] = None,
) -> McEstimate:
    """Perfect-sensor barrier; NEG_INF on the no-investment region.

    delta = 1 and the reward above b: 0;  delta = 0 above b: a (p - b);
    delta = 1 below b: (r / (lam + r)) (p - b);  delta = 0 on
    [m lam / r, b): infimum of the perfect-sensor functional over negative
    thresholds;  delta = 0 below m lam / r: NEG_INF.
    """
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    lam, r = params.lam, params.r
    b = constants.b
    if p >= b:
        exact = 0.0 if delta == 1 else constants.a * (p - b)
        return McEstimate(exact, 0.0, 0)
    if delta == 1:
        return McEstimate(r / (lam + r) * (p - b), 0.0, 0)
    if p < constants.m * lam / r:
        return McEstimate(NEG_INF, 0.0, 0)
    bank = bank if bank is not None else make_bank(params, mc)
    pieces = bank.pieces(0.0, "gamma1")
    _, gamma_star, _ = pieces.minimize(p, 0, lam / r, -math.inf, 0.0)
    return optional_functional(gamma_star, p, params, mc, bank)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass
class BarrierQuery:
    """A lookup: observable reward level and observable jump indicator."""

    p: float
    delta: int


@dataclass
class BarrierTable:
    """Calibrated barrier on a p-grid with closed-form regions.

    ``ell0``/``ell1`` are the barrier values at grid points for jump
    indicator 0/1, with per-point standard errors; the region p >= b (and the
    regime's other closed forms) is always served analytically.  Queries
    between grid points interpolate linearly; queries below the grid are
    clamped (one warning per table).
    """

    regime: str
    eta: float
    params: ModelParams
    constants: Constants
    p_eta: Optional[float]
    B0: Optional[float]
    B1: Optional[float]
    grid: np.ndarray
    ell0: np.ndarray
    ell0_se: np.ndarray
    ell1: np.ndarray
    ell1_se: np.ndarray
    seed: int
    _clamp_warned: bool = False

    # -- queries -------------------------------------------------------------

    def value(self, p: float, delta: int) -> float:
        return float(self.values(np.array([p]), delta)[0])

    def lookup(self, query: BarrierQuery) -> float:
        return self.value(query.p, query.delta)

    def values(self, ps: np.ndarray, delta: int) -> np.ndarray:
        """Vectorized barrier lookup with the closed-form regions applied."""
        if delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")
        ps = np.asarray(ps, dtype=float)
        c = self.constants
        lam, r = self.params.lam, self.params.r
        out = np.empty_like(ps)
        above = ps >= c.b
        out[above] = 0.0 if delta == 1 else c.a * (ps[above] - c.b)
        below = ~above
        if not below.any():
            return out
        if self.regime == PREDICTABLE and delta == 0:
            out[below] = c.a * (ps[below] - c.b)
            return out
        if self.regime == OPTIONAL:
            if delta == 1:
                out[below] = r / (lam + r) * (ps[below] - c.b)
                return out
            frontier = c.m * lam / r
            dead = below & (ps < frontier)
            out[dead] = NEG_INF
            below = below & ~dead
            if not below.any():
                return out
        if (ps[below] < self.grid[0]).any() and not self._clamp_warned:
            logger.warning(
                "barrier query below table grid (min %s); clamping", self.grid[0]
            )
            self._clamp_warned = True
        col = self.ell1 if delta == 1 else self.ell0
        finite = np.isfinite(col)
        out[below] = np.interp(ps[below], self.grid[finite], col[finite])
        return out

    def stderr(self, p: float, delta: int) -> float:
        """Standard error of the tabulated value nearest to p (0 above b)."""
        if p >= self.constants.b:
            return 0.0
        k = int(np.argmin(np.abs(self.grid - p)))
        col = self.ell1_se if delta == 1 else self.ell0_se
        return float(col[k])

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        def enc(arr):
            return [v if math.isfinite(v) else None for v in arr.tolist()]

        return {
            "regime": self.regime,
            "eta": "inf" if math.isinf(self.eta) else self.eta,
            "p_eta": self.p_eta,
            "B0": self.B0,
            "B1": self.B1,
            "constants": {
                "a": self.constants.a,
                "b": self.constants.b,
                "b_stderr": self.constants.b_stderr,
                "delta": self.constants.delta,
                "delta_stderr": self.constants.delta_stderr,
                "m": self.constants.m,
                "tail_bound": self.constants.tail_bound,
            },
            "model": {
                "p_tilde": self.params.p_tilde,
                "r": self.params.r,
                "lambda": self.params.lam,
                "c0": self.params.c0,
            },
            "seed": self.seed,
            "grid": self.grid.tolist(),
            "ell0": enc(self.ell0),
            "ell0_se": self.ell0_se.tolist(),
            "ell1": enc(self.ell1),
            "ell1_se": self.ell1_se.tolist(),
        }

    @staticmethod
    def from_dict(data: dict, params: ModelParams) -> "BarrierTable":
        cd = data["constants"]
        constants = Constants(
            a=cd["a"],
            b=cd["b"],
            delta=cd["delta"],
            m=cd["m"],
            b_stderr=cd["b_stderr"],
            delta_stderr=cd["delta_stderr"],
            tail_bound=cd.get("tail_bound", 0.0),
        )
        def dec(values):
            return np.array(
                [NEG_INF if v is None else v for v in values], dtype=float
            )

        eta = math.inf if data["eta"] == "inf" else float(data["eta"])
        return BarrierTable(
            regime=data["regime"],
            eta=eta,
            params=params,
            constants=constants,
            p_eta=data["p_eta"],
            B0=data["B0"],
            B1=data["B1"],
            grid=np.array(data["grid"], dtype=float),
            ell0=dec(data["ell0"]),
            ell0_se=np.array(data["ell0_se"], dtype=float),
            ell1=dec(data["ell1"]),
            ell1_se=np.array(data["ell1_se"], dtype=float),
            seed=data["seed"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False, sort_keys=True)


def default_p_min(params: ModelParams) -> float:
    """Default grid floor: initial level minus ten jump scales."""
    return params.p_tilde - 10.0 * params.law.std()


def build_table(
    params: ModelParams,
    eta: float,
    constants: Constants,
    mc: McConfig,
    bank: Optional[SampleBank] = None,
    n_points: int = 200,
    p_min: Optional[float] = None,
) -> BarrierTable:
    """Tabulate the barrier for one sensor on [p_min, b].

    The grid always includes b; the closed-form region above b never touches
    the grid.  For the perfect sensor the no-investment frontier m lam / r is
    inserted as a grid point so no cell straddles it.
    """
    if n_points < 2:
        raise ValueError("grid needs at least 2 points")
    bank = bank if bank is not None else make_bank(params, mc)
    b = constants.b
    lam, r = params.lam, params.r
    lam_over_r = lam / r
    lo = default_p_min(params) if p_min is None else p_min
    if lo >= b:
        lo = b - 1.0
    grid = np.linspace(lo, b, n_points)
    regime = resolve_regime(params, eta)

    p_eta: Optional[float] = None
    B0 = B1 = None
    if regime != OPTIONAL:
        p_eta = failure_prob(params.law, eta)
        sc = sensor_constants(params, eta, constants.delta)
        B0, B1 = sc.B0, sc.B1
    else:
        p_eta = 0.0
        frontier = constants.m * lam / r
        if lo < frontier < b:
            grid = np.unique(np.concatenate((grid, [frontier])))

    n = len(grid)
    ell0 = np.empty(n)
    ell0_se = np.zeros(n)
    ell1 = np.empty(n)
    ell1_se = np.zeros(n)

    for k, p in enumerate(grid):
        if p >= b:
            ell0[k] = constants.a * (p - b)
            ell1[k] = 0.0
            continue
        if regime == OPTIONAL:
            ell1[k] = r / (lam + r) * (p - b)
            est = optional_barrier(p, 0, params, constants, mc, bank)
            ell0[k] = est.mean
            ell0_se[k] = est.std_err
            continue
        sc = SensorConstants(eta=eta, p_eta=p_eta, B0=B0, B1=B1)
        if regime == PREDICTABLE:
            ell0[k] = constants.a * (p - b)
        else:
            est0 = sensor_barrier(p, 0, params, eta, constants, sc, mc, bank)
            ell0[k] = est0.mean
            ell0_se[k] = est0.std_err
        est1 = sensor_barrier(p, 1, params, eta, constants, sc, mc, bank)
        ell1[k] = est1.mean
        ell1_se[k] = est1.std_err

    return BarrierTable(
        regime=regime,
        eta=eta,
        params=params,
        constants=constants,
        p_eta=p_eta,
        B0=B0,
        B1=B1,
        grid=grid,
        ell0=ell0,
        ell0_se=ell0_se,
        ell1=ell1,
        ell1_se=ell1_se,
        seed=mc.seed,
    )
