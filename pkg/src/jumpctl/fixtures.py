"""Randomized exact fixtures for the integration identities.

All values are dyadic rationals (eighths), so every product and sum in the
identity checks is exact in double precision and the suites can assert exact
equality rather than tolerances.
"""

from __future__ import annotations

import numpy as np

from .integral import PiecewisePath, TwoArgFixture

GRID = 8.0  # denominators: eighths
TMAX = 6.0


def _dyadic(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(rng.integers(int(lo * GRID), int(hi * GRID) + 1)) / GRID


def _times(rng: np.random.Generator, k: int, include=()) -> list:
    pool = np.arange(0, int(TMAX * GRID) + 1)
    picks = rng.choice(pool, size=min(k, len(pool)), replace=False)
    times = {int(p) / GRID for p in picks} | set(include)
    return sorted(times)


def random_integrator(
    rng: np.random.Generator, with_ramp: bool = False, times=None
) -> PiecewisePath:
    """Increasing ladlag step path with dyadic jumps (optionally one ramp)."""
    if times is None:
        times = _times(rng, int(rng.integers(1, 6)))
    ramps = ()
    if with_ramp:
        t0 = _dyadic(rng, 0, TMAX - 1)
        t1 = _dyadic(rng, t0 + 1 / GRID, TMAX)
        ramps = ((t0, t1, _dyadic(rng, 0, 2)),)

    def gain(a: float, b: float) -> float:
        g = 0.0
        for (r0, r1, slope) in ramps:
            lo, hi = max(r0, a), min(r1, b)
            if hi > lo:
                g += slope * (hi - lo)
        return g

    initial = _dyadic(rng, 0, 1)
    level = initial
    prev_t = 0.0
    bps = []
    for t in times:
        left = level + gain(prev_t, t)
        d_at = _dyadic(rng, 0, 2)
        d_rt = _dyadic(rng, 0, 2)
        bps.append((t, left, left + d_at, left + d_at + d_rt))
        level = left + d_at + d_rt
        prev_t = t
    return PiecewisePath(initial, tuple(bps), ramps)


def random_step_path(rng: np.random.Generator, times=None) -> PiecewisePath:
    """Bounded dyadic step path (integrand): arbitrary signed levels."""
    if times is None:
        times = _times(rng, int(rng.integers(0, 5)))
    run = _dyadic(rng, -2, 2)
    initial = run
    bps = []
    for t in times:
        v_at = _dyadic(rng, -2, 2)
        v_right = _dyadic(rng, -2, 2)
        bps.append((t, run, v_at, v_right))
        run = v_right
    return PiecewisePath(initial, tuple(bps))


def random_rc_step_path(rng: np.random.Generator) -> PiecewisePath:
    """Right-continuous dyadic step path (v_at == v_right at breakpoints)."""
    base = random_step_path(rng)
    bps = tuple((t, left, right, right) for (t, left, _a, right) in base.breakpoints)
    return PiecewisePath(base.initial, bps)


def random_fubini_fixture(rng: np.random.Generator) -> tuple:
    """(TwoArgFixture, integrator A); adversarial time collisions included.

    With probability ~1/2 one atom of B is placed exactly at a breakpoint of
    A, the case where the two orderings weight an A right jump differently.
    """
    A = random_integrator(rng, with_ramp=bool(rng.integers(0, 2)))
    n_atoms = int(rng.integers(1, 4))
    times = _times(rng, n_atoms)
    if A.breakpoints and rng.integers(0, 2):
        collide = A.breakpoints[int(rng.integers(0, len(A.breakpoints)))][0]
        times = sorted(set(times[: max(n_atoms - 1, 1)]) | {collide})
    atoms = tuple((t, _dyadic(rng, 1 / GRID, 2)) for t in times)
    paths = tuple(random_step_path(rng) for _ in atoms)
    return TwoArgFixture(atoms, paths), A
