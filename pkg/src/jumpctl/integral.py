"""Integration against ladlag increasing paths and the value functionals.

An increasing ladlag integrator A splits into its left/continuous part (left
jumps plus continuous increase) and its right-jump part.  The star integral
weights the former by the integrand evaluated at the instant and the latter
by the integrand's right envelope:

    int phi *dA  =  int phi dA^{ldc}  +  int phi^* dA^{rdc}.

For the piecewise-constant paths used here the envelopes are represented
exactly by the stored right values; no numerical limsup is ever taken.  Over
an interval [0, T] the right-jump part runs over [0, T) only; over a tail
[t, inf) both parts include t.

The value of a control is the star integral of the observable discounted
reward against the control minus the quadratic risk charged at the clock's
atoms, evaluated at the instant level C_t (post proactive move, pre follow-up
move) -- the convention that rewards acting before the tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .control import LadlagControl
from .paths import EventPath, ModelParams, risk_atoms
from .sensor import ObservedPath, projected_reward


@dataclass(frozen=True)
class PiecewisePath:
    """Piecewise-constant ladlag path, optionally with linear ramp segments.

    ``initial`` is the value at 0- and on [0, t_1) (unless a breakpoint sits
    at 0).  Each breakpoint (t, v_left, v_at, v_right) must have v_left equal
    to the running value; between breakpoints the value is the previous
    v_right plus any ramp accumulated since.  Ramps (t0, t1, slope) model the
    continuous part for integrator fixtures and must not overlap breakpoints'
    jumps in a contradictory way: the running value track includes them.
    """

    initial: float
    breakpoints: tuple = ()
    ramps: tuple = ()

    def __post_init__(self):
        last = -math.inf
        for (t, *_rest) in self.breakpoints:
            if t < 0 or t <= last:
                raise ValueError("breakpoints must be at increasing times >= 0")
            last = t
        for (t0, t1, _) in self.ramps:
            if not 0 <= t0 < t1:
                raise ValueError("ramp intervals must be ordered and nonnegative")
        run = self.initial
        for (t, v_left, _v_at, v_right) in self.breakpoints:
            run += self._ramp_gain(-math.inf, t)
            if abs(v_left - run) > 1e-9:
                raise ValueError(
                    f"left value at t={t} is {v_left}, running value {run}"
                )
            run = v_right - self._ramp_gain(-math.inf, t)

    def _ramp_gain(self, a: float, b: float) -> float:
        """Total ramp increase on (a, b]."""
        gain = 0.0
        for (t0, t1, slope) in self.ramps:
            lo = max(t0, a)
            hi = min(t1, b)
            if hi > lo:
                gain += slope * (hi - lo)
        return gain

    def value(self, t: float, side: str = "at") -> float:
        run = self.initial + self._ramp_gain(-math.inf, t)
        for (tk, v_left, v_at, v_right) in self.breakpoints:
            if tk < t:
                run += v_right - v_left
            elif tk == t:
                return {"left": v_left, "at": v_at, "right": v_right}[side]
            else:
                break
        return run

    def left_limits(self) -> "PiecewisePath":
        """The path of left limits (used by the CS-integral identity)."""
        bps = []
        for (t, v_left, _v_at, v_right) in self.breakpoints:
            bps.append((t, v_left, v_left, v_right))
        return PiecewisePath(self.initial, tuple(bps), self.ramps)


def _steps(obj) -> tuple:
    """(initial, breakpoints, ramps) of a PiecewisePath or LadlagControl."""
    if isinstance(obj, LadlagControl):
        return obj.c0, obj.breakpoints, ()
    return obj.initial, obj.breakpoints, obj.ramps


def _phi_value(phi, t: float, side: str) -> float:
    return phi.value(t, side)


def _continuous_contrib(phi, ramps, lo: float, hi: float) -> float:
    """int phi dA^c over [lo, hi] for piecewise-constant phi."""
    if not ramps:
        return 0.0
    cuts = sorted(
        {lo, hi}
        | {t for (t, *_r) in getattr(phi, "breakpoints", ())}
        | {t0 for (t0, _t1, _s) in ramps}
        | {t1 for (_t0, t1, _s) in ramps}
    )
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b <= lo or a >= hi:
            continue
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        slope = sum(s for (t0, t1, s) in ramps if t0 <= mid < t1)
        if slope:
            total += phi.value(mid, "at") * slope * (b - a)
    return total


def star_integral(phi, A, t_end: Optional[float] = None, envelope: str = "upper") -> float:
    """int_{[0, t_end]} phi *dA  (right-jump part over [0, t_end)).

    ``envelope`` selects the right-upper or right-lower envelope of phi; for
    the step paths used here both equal the stored right value, so the two
    integrals coincide whenever right limits are attained.
    """
    del envelope  # exact for step paths: both envelopes are the right value
    _initial, bps, ramps = _steps(A)
    hi = math.inf if t_end is None else t_end
    total = 0.0
    for (t, v_left, v_at, v_right) in bps:
        if t > hi:
            break
        if v_at != v_left:
            total += _phi_value(phi, t, "at") * (v_at - v_left)
        if t < hi and v_right != v_at:
            total += _phi_value(phi, t, "right") * (v_right - v_at)
    total += _continuous_contrib(phi, ramps, 0.0, hi)
    return total


def lower_star_integral(phi, A, t_end: Optional[float] = None) -> float:
    """Same as star_integral with the right-lower envelope."""
    return star_integral(phi, A, t_end, envelope="lower")


def star_integral_tail(phi, A, t_start: float) -> float:
    """int_{[t_start, inf)} phi *dA (both parts include t_start)."""
    _initial, bps, ramps = _steps(A)
    total = 0.0
    for (t, v_left, v_at, v_right) in bps:
        if t < t_start:
            continue
        total += _phi_value(phi, t, "at") * (v_at - v_left)
        total += _phi_value(phi, t, "right") * (v_right - v_at)
    total += _continuous_contrib(phi, ramps, t_start, math.inf)
    return total


def cs_integral(phi, A, t_end: Optional[float] = None) -> float:
    """Left-sampling integral: continuous part at phi, left jumps at phi_{t-},
    right jumps over [0, t_end) at phi_t.

    For right-continuous phi it equals the star integral of the left-limit
    path of phi.
    """
    _initial, bps, ramps = _steps(A)
    hi = math.inf if t_end is None else t_end
    total = 0.0
    for (t, v_left, v_at, v_right) in bps:
        if t > hi:
            break
        if v_at != v_left:
            total += _phi_value(phi, t, "left") * (v_at - v_left)
        if t < hi and v_right != v_at:
            total += _phi_value(phi, t, "at") * (v_right - v_at)
    total += _continuous_contrib(phi, ramps, 0.0, hi)
    return total


# ---------------------------------------------------------------------------
# Fubini fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoArgFixture:
    """phi_{s,t} for finitely many t-atoms of B: one s-path per atom."""

    atoms: tuple  # ((t, weight), ...) of the right-continuous integrator B
    paths: tuple  # matching PiecewisePath in s per atom

    def phi(self, s: float, t_index: int, side: str) -> float:
        return self.paths[t_index].value(s, side)


def inner_integral_path(fixture: TwoArgFixture, order: str) -> PiecewisePath:
    """The inner B-integral as a path in s.

    order 'i' is s -> int_{[0,s]} phi dB; order 'ii' is
    s -> int_{[s,inf)} phi dB.  The right values encode the right limits: for
    'i' atoms at exactly s stay in (they are <= u for every u > s); for 'ii'
    they drop out.
    """
    atoms = fixture.atoms
    cuts = sorted(
        {0.0}
        | {t for (t, _w) in atoms}
        | {t for p in fixture.paths for (t, *_r) in p.breakpoints}
    )

    def section(s: float, side: str) -> float:
        total = 0.0
        for idx, (t, w) in enumerate(atoms):
            if order == "i":
                keep = t < s if side == "left" else t <= s
            else:
                keep = t > s if side == "right" else t >= s
            if keep:
                total += w * fixture.phi(s, idx, side)
        return total

    bps = tuple(
        (s, section(s, "left"), section(s, "at"), section(s, "right")) for s in cuts
    )
    return PiecewisePath(bps[0][1], bps)


def fubini_sides(fixture: TwoArgFixture, A) -> tuple:
    """(lhs_i, rhs_i, lhs_ii, rhs_ii) of both iterated-integral orderings.

    Ordering (i):  int_s [ int_{[0,s]} phi dB ] *dA_s
                 = sum_t w_t int_{[t, inf)} phi *dA.
    Ordering (ii): int_s [ int_{[s,inf)} phi dB ] *dA_s
                 = sum_t w_t int_{[0,t]} phi *dA.
    """
    atoms = fixture.atoms
    lhs_i = star_integral(inner_integral_path(fixture, "i"), A)
    lhs_ii = star_integral(inner_integral_path(fixture, "ii"), A)
    rhs_i = sum(
        w * star_integral_tail(fixture.paths[idx], A, t)
        for idx, (t, w) in enumerate(atoms)
    )
    rhs_ii = sum(
        w * star_integral(fixture.paths[idx], A, t_end=t)
        for idx, (t, w) in enumerate(atoms)
    )
    return lhs_i, rhs_i, lhs_ii, rhs_ii


def fubini_check(fixture: TwoArgFixture, A) -> bool:
    """Exact equality of both iterated-integral orderings."""
    lhs_i, rhs_i, lhs_ii, rhs_ii = fubini_sides(fixture, A)
    return lhs_i == rhs_i and lhs_ii == rhs_ii


# ---------------------------------------------------------------------------
# value functionals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValueReport:
    """Aggregated value estimate: total = reward_term - risk_term."""

    reward_term: float
    risk_term: float
    total: float
    std_err: float
    n_paths: int
    tail_bound: float


def value_of_control(
    path: EventPath, obs: ObservedPath, control: LadlagControl, params: ModelParams
) -> float:
    """Realized value of one control on one path.

    Reward: star integral of the observable discounted reward against the
    control (the control only moves at breakpoints, so the integral is the
    finite sum of its jumps weighted by the observable reward at/just after
    the move).  Risk: quadratic charge at each clock atom on the instant
    level.
    """
    r = params.r
    reward = 0.0
    for (t, kind, size) in control.increments():
        side = "at" if kind == "at" else "right"
        reward += projected_reward(obs, t, r, side) * size
    risk = 0.0
    for (t, w) in risk_atoms(path, r).atoms:
        level = control.level_at(t, "at")
        risk += w * level * level / 2.0
    return reward - risk


def closed_form_value(path: EventPath, control: LadlagControl, params: ModelParams) -> float:
    """Dual form of the realized value: sum over clock atoms of
    e^{-r t} [C_t (C_t - c0) - C_t^2 / 2]."""
    c0 = control.c0
    total = 0.0
    for (t, w) in risk_atoms(path, params.r).atoms:
        level = control.level_at(t, "at")
        total += w * (level * (level - c0) - level * level / 2.0)
    return total


def truncate_control(control: LadlagControl, cap: float) -> LadlagControl:
    """C wedge n: the control capped at a level (monotone truncation).

    The cap must not cut below the starting position.
    """
    if cap < control.c0:
        raise ValueError("cap below the starting position")
    bps = []
    run = control.c0
    for (t, left, at, right) in control.breakpoints:
        trip = (t, min(left, cap), min(at, cap), min(right, cap))
        if trip[3] > run:
            bps.append(trip)
            run = trip[3]
    return LadlagControl(control.c0, tuple(bps), control.horizon)


def cadlag_approximation(control: LadlagControl, k: int) -> LadlagControl:
    """Right-continuous approximation: right jumps execute at t + 1/k.

    The left/continuous part is kept; each right jump of size d at time t is
    re-applied as an ordinary jump at t + 1/k (clipped to the horizon).  The
    result has no right jumps.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    moves: dict = {}
    for (t, left, at, right) in control.breakpoints:
        if at > left:
            moves[t] = moves.get(t, 0.0) + (at - left)
        if right > at:
            u = min(t + 1.0 / k, control.horizon)
            moves[u] = moves.get(u, 0.0) + (right - at)
    bps = []
    run = control.c0
    for t in sorted(moves):
        size = moves[t]
        if size <= 0:
            continue
        bps.append((t, run, run + size, run + size))
        run += size
    return LadlagControl(control.c0, tuple(bps), control.horizon)
