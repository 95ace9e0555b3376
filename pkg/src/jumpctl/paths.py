"""Compound Poisson reward paths and the discounted risk clock.

The reward level is a marked point process: i.i.d. marks arriving at Poisson
times, on top of an initial level.  Discounting by ``exp(-r t)`` turns the
event counter into the risk clock whose atoms carry weight ``exp(-r t_k)``.
All horizons are finite: expectations are truncated at
``T_max = ln(1/eps_trunc)/r``, which bounds every discounted tail by
``eps_trunc``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

Side = Literal["left", "at", "right"]


# ---------------------------------------------------------------------------
# jump mark laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JumpLaw:
    """Distribution of jump marks with closed-form CDF access.

    kind:
        * ``uniform``          -- params ``(lo, hi)``
        * ``gaussian_mixture`` -- params ``((weight, mean, stddev), ...)``
        * ``discrete``         -- params ``((value, prob), ...)``

    Marks must not charge zero: P(Y = 0) = 0.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind == "uniform":
            lo, hi = self.params
            if not lo < hi:
                raise ValueError(f"uniform law needs lo < hi, got ({lo}, {hi})")
            if lo == 0.0 and hi == 0.0:
                raise ValueError("uniform law degenerate at 0")
        elif self.kind == "gaussian_mixture":
            comps = tuple(tuple(c) for c in self.params)
            object.__setattr__(self, "params", comps)
            total = sum(w for w, _, _ in comps)
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"mixture weights sum to {total}, expected 1")
            if any(sd <= 0 for _, _, sd in comps):
                raise ValueError("mixture stddevs must be positive")
        elif self.kind == "discrete":
            atoms = tuple(tuple(a) for a in self.params)
            object.__setattr__(self, "params", atoms)
            total = sum(p for _, p in atoms)
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"discrete probs sum to {total}, expected 1")
            if any(p < 0 for _, p in atoms):
                raise ValueError("discrete probs must be nonnegative")
            if any(v == 0.0 and p > 0 for v, p in atoms):
                raise ValueError("discrete law must not charge the value 0")
        else:
            raise ValueError(f"unknown jump law kind {self.kind!r}")

    # -- moments -----------------------------------------------------------

    def mean(self) -> float:
        if self.kind == "uniform":
            lo, hi = self.params
            return 0.5 * (lo + hi)
        if self.kind == "gaussian_mixture":
            return sum(w * mu for w, mu, _ in self.params)
        return sum(v * p for v, p in self.params)

    def std(self) -> float:
        if self.kind == "uniform":
            lo, hi = self.params
            return (hi - lo) / math.sqrt(12.0)
        if self.kind == "gaussian_mixture":
            m = self.mean()
            m2 = sum(w * (sd * sd + mu * mu) for w, mu, sd in self.params)
            return math.sqrt(max(m2 - m * m, 0.0))
        m = self.mean()
        m2 = sum(v * v * p for v, p in self.params)
        return math.sqrt(max(m2 - m * m, 0.0))

    # -- cdf / sampling ------------------------------------------------------

    def cdf(self, x: float) -> float:
        """P(Y <= x), closed form."""
        if self.kind == "uniform":
            lo, hi = self.params
            if x < lo:
                return 0.0
            if x >= hi:
                return 1.0
            return (x - lo) / (hi - lo)
        if self.kind == "gaussian_mixture":
            return sum(
                w * 0.5 * (1.0 + math.erf((x - mu) / (sd * math.sqrt(2.0))))
                for w, mu, sd in self.params
            )
        return sum(p for v, p in self.params if v <= x)

    def abs_cdf_strict(self, eta: float) -> float:
        """P(|Y| < eta), closed form; the detector's failure probability."""
        if eta <= 0.0:
            return 0.0
        if math.isinf(eta):
            return 1.0
        if self.kind == "discrete":
            return sum(p for v, p in self.params if abs(v) < eta)
        if self.kind == "uniform":
            lo, hi = self.params
            left = max(lo, -eta)
            right = min(hi, eta)
            if right <= left:
                return 0.0
            return (right - left) / (hi - lo)
        # continuous mixture: P(-eta < Y < eta); the boundary is null
        return self.cdf(eta) - self.cdf(-eta)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            lo, hi = self.params
            return rng.uniform(lo, hi, size)
        if self.kind == "gaussian_mixture":
            weights = np.array([w for w, _, _ in self.params])
            means = np.array([mu for _, mu, _ in self.params])
            sds = np.array([sd for _, _, sd in self.params])
            comp = rng.choice(len(weights), size=size, p=weights)
            return rng.normal(means[comp], sds[comp])
        values = np.array([v for v, _ in self.params], dtype=float)
        probs = np.array([p for _, p in self.params])
        return values[rng.choice(len(values), size=size, p=probs)]


def uniform_law(lo: float, hi: float) -> JumpLaw:
    return JumpLaw("uniform", (lo, hi))


def gaussian_mixture_law(components: Sequence[tuple]) -> JumpLaw:
    return JumpLaw("gaussian_mixture", tuple(tuple(c) for c in components))


def discrete_law(atoms: Sequence[tuple]) -> JumpLaw:
    return JumpLaw("discrete", tuple(tuple(a) for a in atoms))


# ---------------------------------------------------------------------------
# model parameters and realized paths
# ---------------------------------------------------------------------------

DEFAULT_EPS_TRUNC = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Reward/risk model: initial level, discount rate, intensity, mark law."""

    p_tilde: float
    r: float
    lam: float
    c0: float
    law: JumpLaw

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("discount rate r must be positive")
        if self.lam <= 0:
            raise ValueError("intensity lambda must be positive")

    def horizon(self, eps_trunc: float = DEFAULT_EPS_TRUNC) -> float:
        """Truncation horizon with discounted tail below eps_trunc."""
        return math.log(1.0 / eps_trunc) / self.r


@dataclass(frozen=True)
class EventPath:
    """One realized trajectory: ordered (time, mark) events up to a horizon."""

    p_tilde: float
    events: tuple
    horizon: float

    def __post_init__(self):
        times = [t for t, _ in self.events]
        if any(t <= 0 for t in times):
            raise ValueError("event times must be strictly positive")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("event times must be strictly increasing")
        if times and times[-1] > self.horizon:
            raise ValueError("event beyond the horizon")
        if any(y == 0.0 for _, y in self.events):
            raise ValueError("marks must be nonzero")

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.events])

    @property
    def marks(self) -> np.ndarray:
        return np.array([y for _, y in self.events])


@dataclass(frozen=True)
class RiskAtoms:
    """Atoms (t_k, e^{-r t_k}) of the discounted risk clock."""

    atoms: tuple

    def total(self) -> float:
        return sum(w for _, w in self.atoms)


def simulate_path(params: ModelParams, horizon: float, rng: np.random.Generator) -> EventPath:
    """Draw one path: exponential(lambda) inter-arrivals, i.i.d. marks."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    times = []
    t = 0.0
    while True:
        t += rng.exponential(1.0 / params.lam)
        if t > horizon:
            break
        times.append(t)
    marks = params.law.sample(rng, len(times))
    return EventPath(params.p_tilde, tuple(zip(times, marks.tolist())), horizon)


def reward_at(path: EventPath, t: float, side: Side = "at") -> float:
    """Undiscounted reward level at time t (side = left | at)."""
    if not 0.0 <= t <= path.horizon:
        raise ValueError(f"t={t} outside [0, {path.horizon}]")
    level = path.p_tilde
    for tk, yk in path.events:
        if tk < t or (side == "at" and tk == t):
            level += yk
        elif tk > t:
            break
    return level


def risk_atoms(path: EventPath, r: float) -> RiskAtoms:
    """One atom e^{-r t_k} per event; no atom at t = 0."""
    if r <= 0:
        raise ValueError("discount rate must be positive")
    return RiskAtoms(tuple((t, math.exp(-r * t)) for t, _ in path.events))


# ---------------------------------------------------------------------------
# flat batch representation (Monte Carlo banks)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathBatch:
    """A bank of paths in flat arrays: path i owns slice offsets[i]:offsets[i+1].

    ``s`` holds the per-path running mark sums (cumulative, post-event) and
    ``disc`` the atom weights e^{-r t}.  Immutable once built; shared
    read-only by every estimator evaluated on the bank (common random numbers).
    """

    params: ModelParams
    horizon: float
    offsets: np.ndarray
    t: np.ndarray
    y: np.ndarray
    s: np.ndarray = field(repr=False)
    disc: np.ndarray = field(repr=False)

    @property
    def n_paths(self) -> int:
        return len(self.offsets) - 1

    @property
    def n_events(self) -> int:
        return int(self.offsets[-1])

    def path(self, i: int) -> EventPath:
        """Materialize path i as an EventPath."""
        a, b = self.offsets[i], self.offsets[i + 1]
        events = tuple(zip(self.t[a:b].tolist(), self.y[a:b].tolist()))
        return EventPath(self.params.p_tilde, events, self.horizon)


def simulate_batch(
    params: ModelParams, horizon: float, rng: np.random.Generator, n_paths: int
) -> PathBatch:
    """Vectorized bank simulation.

    Counts are Poisson(lambda * horizon); given the count, event times are
    uniform order statistics on [0, horizon], which is the same law as the
    exponential-increment construction.
    """
    counts = rng.poisson(params.lam * horizon, n_paths)
    offsets = np.zeros(n_paths + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    raw = rng.random(total) * horizon
    pid = np.repeat(np.arange(n_paths), counts)
    order = np.lexsort((raw, pid))
    t = np.ascontiguousarray(raw[order])
    y = np.ascontiguousarray(params.law.sample(rng, total))
    s = np.cumsum(y)
    if n_paths > 0:
        s = s - np.repeat(_segment_bases(s, offsets), counts)
    disc = np.exp(-params.r * t)
    return PathBatch(params, horizon, offsets, t, y, s, disc)


def _segment_bases(global_cumsum: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Cumulative value just before each segment start (0 for the first)."""
    starts = offsets[:-1]
    bases = np.zeros(len(starts))
    mask = starts > 0
    bases[mask] = global_cumsum[starts[mask] - 1]
    return bases
