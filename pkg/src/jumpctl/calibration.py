"""Monte Carlo calibration of model constants and hitting-time functionals.

Everything here runs on one frozen sample bank per calibration (common random
numbers): the bank is drawn once and reused across every threshold and every
reward level evaluated in the run.  That makes the threshold infimum
well-posed -- as a function of the threshold, each estimator is piecewise
constant with one step per record event in the bank -- and it is exploited by
precomputing *piece tables*: per piece, the accumulated stopping
contributions, from which the functional at any reward level p is a ratio of
affine expressions in p.

Estimator notes
---------------
For a stopping event T of the bank, the risk-clock mass satisfies
``E[R_T] = (lam/r) (1 - E[exp(-r T)])`` (optional stopping of the compensated
counter), so the hitting functionals' denominators are evaluated in the
algebraic form ``(lam/r)(1 - E[e]) - E[e * detected] + Delta`` which charges
the stopping atom exactly when the stop is triggered by an undetected event.
Paths that never stop before the truncation horizon contribute zero to every
discounted term (the tail is bounded by eps_trunc).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels, rng as rngmod
from .paths import DEFAULT_EPS_TRUNC, ModelParams, PathBatch, simulate_batch
from .sensor import detect_flags, failure_prob

DENOM_FLOOR = 1e-10


class EstimationError(RuntimeError):
    """Raised when an estimator is degenerate (vanishing denominator)."""


@dataclass(frozen=True)
class McConfig:
    """Sampling configuration: size, truncation, seed and stream name."""

    n_samples: int = 100_000
    eps_trunc: float = DEFAULT_EPS_TRUNC
    seed: int = 0
    stream: str = rngmod.CALIBRATION

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not 0.0 < self.eps_trunc < 1.0:
            raise ValueError("eps_trunc must be in (0, 1)")


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo mean with its standard error."""

    mean: float
    std_err: float
    n_effective: int

    def __post_init__(self):
        if not (self.std_err >= 0 or math.isnan(self.std_err)):
            raise ValueError("std_err must be nonnegative")


@dataclass(frozen=True)
class Constants:
    """Model constants: a = r/lam exact, m = E[Y] exact, b and delta MC."""

    a: float
    b: float
    delta: float
    m: float
    b_stderr: float
    delta_stderr: float
    tail_bound: float = 0.0


@dataclass(frozen=True)
class SensorConstants:
    """Constants of the threshold-search intervals for one sensor."""

    eta: float
    p_eta: float
    B0: float
    B1: float


# ---------------------------------------------------------------------------
# frozen sample bank
# ---------------------------------------------------------------------------

@dataclass
class SampleBank:
    """Frozen path bank plus lazily cached derived structures.

    The arrays are never mutated after construction; caches only memoize
    functions of them, so sharing a bank across threads is safe for readers.
    """

    batch: PathBatch
    _t0: Optional[tuple] = field(default=None, repr=False)
    _flags: dict = field(default_factory=dict, repr=False)
    _pieces: dict = field(default_factory=dict, repr=False)

    @property
    def params(self) -> ModelParams:
        return self.batch.params

    @property
    def n(self) -> int:
        return self.batch.n_paths

    # -- first nonneg-sum event -------------------------------------------

    def t0_samples(self) -> tuple:
        """(e, es, r_pre) arrays for the first event with nonneg mark sum.

        Paths that never reach a nonnegative sum before the horizon count as
        stopping at infinity: zero discounted terms, full accumulated clock.
        """
        if self._t0 is None:
            b = self.batch
            total = b.n_events
            BIG = total  # one-past-the-end sentinel
            idx = np.arange(total, dtype=np.int64)
            cand = np.where(b.s >= 0.0, idx, BIG)
            first = np.full(self.n, BIG, dtype=np.int64)
            counts = np.diff(b.offsets)
            nonempty = counts > 0
            if nonempty.any():
                first[nonempty] = np.minimum.reduceat(
                    cand, b.offsets[:-1][nonempty]
                )
            valid = first < BIG
            safe = np.minimum(first, max(total - 1, 0))
            e = np.where(valid, b.disc[safe] if total else 0.0, 0.0)
            es = np.where(valid, e * (b.s[safe] if total else 0.0), 0.0)
            cum = np.concatenate(([0.0], np.cumsum(b.disc)))
            start = cum[b.offsets[:-1]]
            stop = np.where(valid, cum[safe], cum[b.offsets[1:]])
            # r_pre excludes the stopping atom itself
            r_pre = stop - start
            self._t0 = (e, es, r_pre)
        return self._t0

    # -- detection flags / piece tables per sensor -------------------------

    def flags(self, eta: float) -> np.ndarray:
        key = float(eta)
        if key not in self._flags:
            self._flags[key] = detect_flags(self.batch.y, eta)
        return self._flags[key]

    def pieces(self, eta: float, kind: str) -> "PieceTable":
        """Piece table for the threshold sweep of one functional family.

        kind = 'gamma0' sweeps the undetected threshold upward from 0 (the
        detected threshold pinned at 0); kind = 'gamma1' sweeps the detected
        threshold downward from 0 (the undetected threshold pinned at 0).
        """
        key = (float(eta), kind)
        if key not in self._pieces:
            b = self.batch
            det = self.flags(eta)
            if kind == "gamma0":
                init, thr, dlt = kernels.gamma0_transitions(
                    b.offsets, b.s, b.disc, det
                )
                self._pieces[key] = PieceTable.build(
                    "gamma0", init, thr, dlt, self.n
                )
            elif kind == "gamma1":
                init, thr, dlt = kernels.gamma1_transitions(
                    b.offsets, b.s, b.disc, det
                )
                self._pieces[key] = PieceTable.build(
                    "gamma1", init, thr, dlt, self.n
                )
            else:
                raise ValueError(f"unknown piece kind {kind!r}")
        return self._pieces[key]


def make_bank(params: ModelParams, mc: McConfig) -> SampleBank:
    gen = rngmod.stream(mc.seed, mc.stream)
    batch = simulate_batch(params, params.horizon(mc.eps_trunc), gen, mc.n_samples)
    return SampleBank(batch)


# ---------------------------------------------------------------------------
# piece tables: the functional as a step function of the threshold
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PieceTable:
    """Stopping-contribution sums per threshold piece.

    ``edges`` has one more entry than there are pieces; piece k covers the
    threshold interval (edges[k], edges[k+1]] for the 'gamma0' kind (ascending
    edges, last edge +inf) and [edges[k+1], edges[k]) for 'gamma1'
    (descending edges, last edge -inf).  ``sums[k]`` holds the summed
    (e, e*s, e*det) stopping contributions over the bank on piece k.
    """

    kind: str
    edges: np.ndarray
    sums: np.ndarray
    n: int

    @staticmethod
    def build(kind: str, init: np.ndarray, thr: np.ndarray, dlt: np.ndarray, n: int) -> "PieceTable":
        if kind == "gamma0":
            order = np.argsort(thr, kind="stable")
        else:
            order = np.argsort(-thr, kind="stable")
        thr = thr[order]
        csum = init + np.cumsum(dlt[order], axis=0) if len(thr) else init.reshape(1, 3)[:0]
        # collapse ties: keep the accumulated state after the last equal edge
        if len(thr):
            last = np.r_[thr[1:] != thr[:-1], True]
            uniq = thr[last]
            states = csum[last]
            sums = np.vstack([init, states])
            tail = math.inf if kind == "gamma0" else -math.inf
            edges = np.concatenate(([0.0], uniq, [tail]))
        else:
            sums = init.reshape(1, 3)
            edges = np.array([0.0, math.inf if kind == "gamma0" else -math.inf])
        return PieceTable(kind, edges, sums, n)

    def minimize(
        self, p: float, delta: int, lam_over_r: float, lo: float, hi: float
    ) -> tuple:
        """Infimum of the functional over thresholds in the open (lo, hi).

        Returns (value, gamma_star, piece_index); gamma_star is an interior
        representative of the attaining piece.  Pieces with denominator below
        DENOM_FLOOR evaluate to +inf (they cannot attain an infimum of a
        finite family).
        """
        lower = np.minimum(self.edges[:-1], self.edges[1:])
        upper = np.maximum(self.edges[:-1], self.edges[1:])
        valid = (lower < hi) & (upper > lo)
        if not valid.any():
            raise EstimationError(
                f"empty threshold interval ({lo}, {hi}) for {self.kind}"
            )
        mu = self.sums / self.n
        num = (1.0 - mu[:, 0]) * p - mu[:, 1]
        den = lam_over_r * (1.0 - mu[:, 0]) - mu[:, 2] + delta
        f = np.where(den >= DENOM_FLOOR, num / np.where(den >= DENOM_FLOOR, den, 1.0), math.inf)
        f = np.where(valid, f, math.inf)
        k = int(np.argmin(f))
        if not math.isfinite(f[k]):
            raise EstimationError(
                f"all pieces degenerate on ({lo}, {hi}) for {self.kind}"
            )
        g_lo = max(lower[k], lo)
        g_hi = min(upper[k], hi)
        gamma_star = 0.5 * (g_lo + g_hi)
        if math.isinf(g_lo):
            gamma_star = g_hi - 1.0
        if math.isinf(g_hi):
            gamma_star = g_lo + 1.0
        return float(f[k]), float(gamma_star), k


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def sample_T0(params: ModelParams, mc: McConfig, bank: Optional[SampleBank] = None) -> tuple:
    """Per-sample (e^{-rT0}, e^{-rT0} * running sum at T0, clock before T0)."""
    bank = bank if bank is not None else make_bank(params, mc)
    return bank.t0_samples()


def _ratio_se(num: np.ndarray, den_complement: np.ndarray, n: int) -> float:
    """Delta-method SE of mean(num) / (1 - mean(den_complement))."""
    d = float(den_complement.mean())
    g = float(num.mean())
    cov = np.cov(np.vstack([num, den_complement]), ddof=1) / n
    grad = np.array([1.0 / (1.0 - d), g / (1.0 - d) ** 2])
    return float(np.sqrt(max(grad @ cov @ grad, 0.0)))


def compute_b(
    params: ModelParams, mc: McConfig, bank: Optional[SampleBank] = None
) -> tuple:
    """Estimate (b, delta) from the first nonneg-sum stopping time.

    b = E[e^{-rT0} * sum] / (1 - E[e^{-rT0}]), delta = E[e^{-rT0}].
    """
    bank = bank if bank is not None else make_bank(params, mc)
    e, es, _ = bank.t0_samples()
    n = bank.n
    d = float(e.mean())
    if 1.0 - d < 1e-12:
        raise EstimationError("1 - E[e^{-rT0}] degenerate")
    b_mean = float(es.mean()) / (1.0 - d)
    b_se = _ratio_se(es, e, n)
    d_se = float(e.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return (
        McEstimate(b_mean, b_se, n),
        McEstimate(d, d_se, n),
    )


def compute_b_running_sup(
    params: ModelParams, mc: McConfig, bank: Optional[SampleBank] = None
) -> McEstimate:
    """Alternative b estimate from the running supremum of pre-event sums.

    b = E[sum_k e^{-r t_k} sup-so-far] / E[sum_k e^{-r t_k}]; delta-method SE
    over the per-path pair.
    """
    bank = bank if bank is not None else make_bank(params, mc)
    b = bank.batch
    pairs = kernels.runsup_weights(b.offsets, b.s, b.disc)
    num, den = pairs[:, 0], pairs[:, 1]
    mun, mud = float(num.mean()), float(den.mean())
    if mud < 1e-12:
        raise EstimationError("risk-clock mass degenerate")
    n = bank.n
    cov = np.cov(np.vstack([num, den]), ddof=1) / n
    grad = np.array([1.0 / mud, -mun / mud**2])
    se = float(np.sqrt(max(grad @ cov @ grad, 0.0)))
    return McEstimate(mun / mud, se, n)


def tail_bound(params: ModelParams, mc: McConfig) -> float:
    """Documented truncation tail proxy: e^{-r T_max} (1 + E|sum Y|)."""
    horizon = params.horizon(mc.eps_trunc)
    mean_events = params.lam * horizon
    mean_abs = abs(params.law.mean()) + params.law.std()
    return math.exp(-params.r * horizon) * (1.0 + mean_events * mean_abs)


def calibrate_constants(
    params: ModelParams, mc: McConfig, bank: Optional[SampleBank] = None
) -> Constants:
    bank = bank if bank is not None else make_bank(params, mc)
    b_est, d_est = compute_b(params, mc, bank)
    return Constants(
        a=params.r / params.lam,
        b=b_est.mean,
        delta=d_est.mean,
        m=params.law.mean(),
        b_stderr=b_est.std_err,
        delta_stderr=d_est.std_err,
        tail_bound=tail_bound(params, mc),
    )


def sensor_constants(params: ModelParams, eta: float, delta: float) -> SensorConstants:
    """Search-interval constants for one sensor, exact in (lam, r, p_eta, delta)."""
    lam, r = params.lam, params.r
    p_eta = failure_prob(params.law, eta)
    if p_eta <= 0.0:
        raise EstimationError(
            f"sensor with eta={eta} never fails (p_eta=0); use the perfect-sensor path"
        )
    B0 = 1.0 - (lam * r / (lam + r)) * (1.0 - p_eta) / (r + lam * (1.0 - delta))
    B1 = (1.0 - lam * p_eta + ((lam + r) * lam / r) * (1.0 - delta)) / (lam * p_eta)
    return SensorConstants(eta=eta, p_eta=p_eta, B0=B0, B1=B1)


# ---------------------------------------------------------------------------
# hitting-time functionals
# ---------------------------------------------------------------------------

def _functional_from_samples(
    contrib: np.ndarray, p: float, delta: int, lam_over_r: float, n: int
) -> McEstimate:
    """Ratio estimator with delta-method SE from per-path (e, es, ed)."""
    mu = contrib.mean(axis=0)
    num = (1.0 - mu[0]) * p - mu[1]
    den = lam_over_r * (1.0 - mu[0]) - mu[2] + delta
    if den < DENOM_FLOOR:
        return McEstimate(math.inf, math.inf, n)
    grad = np.array(
        [
            (-p * den + num * lam_over_r) / den**2,
            -1.0 / den,
            num / den**2,
        ]
    )
    cov = np.cov(contrib.T, ddof=1) / n
    se = float(np.sqrt(max(grad @ cov @ grad, 0.0)))
    return McEstimate(num / den, se, n)


def hitting_functional(
    gamma0: float,
    gamma1: float,
    eta: float,
    delta: int,
    p: float,
    params: ModelParams,
    mc: McConfig,
    bank: Optional[SampleBank] = None,
) -> McEstimate:
    """Point evaluation of the two-threshold hitting functional.

    The stopping event is the first event j with (detected and post-sum >=
    gamma1) or (post-sum >= gamma0); the estimator is
    ``[(1 - E[e])p - E[e s]] / [(lam/r)(1 - E[e]) - E[e detected] + delta]``.
    A denominator below DENOM_FLOOR yields the +inf sentinel.
    """
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    bank = bank if bank is not None else make_bank(params, mc)
    b = bank.batch
    det = bank.flags(eta)
    contrib = kernels.hitting_samples(b.offsets, b.s, b.disc, det, gamma0, gamma1)
    return _functional_from_samples(
        contrib, p, delta, params.lam / params.r, bank.n
    )


def optional_functional(
    gamma: float,
    p: float,
    params: ModelParams,
    mc: McConfig,
    bank: Optional[SampleBank] = None,
) -> McEstimate:
    """Perfect-sensor hitting functional: stop at the first event with
    post-sum >= gamma; every stop is detected."""
    if not gamma < 0:
        raise ValueError("gamma must be negative")
    bank = bank if bank is not None else make_bank(params, mc)
    b = bank.batch
    ones = np.ones_like(b.disc)
    contrib = kernels.hitting_samples(b.offsets, b.s, b.disc, ones, math.inf, gamma)
    return _functional_from_samples(contrib, p, 0, params.lam / params.r, bank.n)
