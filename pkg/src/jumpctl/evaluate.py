"""Batch valuation of barrier policies over scenario banks.

Vectorizes the per-path pipeline (observe -> barrier -> running-sup control
-> realized value) across a whole bank through the kernel layer; the result
must agree exactly with the per-path operations, which the tests enforce.
Also hosts the suboptimal policy variants used for dominance checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .barrier import NEG_INF, BarrierTable
from .calibration import McConfig, SampleBank, make_bank
from .integral import ValueReport
from .paths import ModelParams, PathBatch
from .sensor import detect_flags


@dataclass(frozen=True)
class EventGrid:
    """Per-event inputs of the control/value kernel for one sensor."""

    lat: np.ndarray
    lrt: np.ndarray
    proj_at: np.ndarray
    proj_rt: np.ndarray
    l0: float


def event_grid(batch: PathBatch, table: BarrierTable, eta: float) -> EventGrid:
    """Barrier and observable-reward values at every event of the bank."""
    p0 = batch.params.p_tilde
    post = p0 + batch.s
    pre = post - batch.y
    det = detect_flags(batch.y, eta)
    detected = det != 0.0
    lat = np.where(
        detected, table.values(post, 1), table.values(pre, 0)
    )
    lrt = table.values(post, 0)
    proj_at = np.where(detected, post, pre) * batch.disc
    proj_rt = post * batch.disc
    return EventGrid(lat, lrt, proj_at, proj_rt, table.value(p0, 0))


@dataclass(frozen=True)
class PathValues:
    """Per-path realized (reward, risk, closed-form) triples."""

    reward: np.ndarray
    risk: np.ndarray
    closed: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.reward - self.risk

    def write_csv(self, path) -> None:
        """Per-path value rows: path_id, reward_term, risk_term, total."""
        with open(path, "w", newline="") as fh:
            fh.write("path_id,reward_term,risk_term,total\n")
            total = self.total
            for i in range(len(self.reward)):
                row = (float(self.reward[i]), float(self.risk[i]), float(total[i]))
                fh.write(f"{i},{row[0]!r},{row[1]!r},{row[2]!r}\n")


def run_policy(batch: PathBatch, grid: EventGrid) -> PathValues:
    """Evaluate the running-sup policy of an event grid over a bank."""
    params = batch.params
    out = kernels.path_values(
        batch.offsets,
        batch.disc,
        np.ascontiguousarray(grid.lat),
        np.ascontiguousarray(grid.lrt),
        np.ascontiguousarray(grid.proj_at),
        np.ascontiguousarray(grid.proj_rt),
        grid.l0,
        params.c0,
        params.p_tilde,
    )
    return PathValues(out[:, 0], out[:, 1], out[:, 2])


def report(values: PathValues, batch: PathBatch, use_closed: bool = False) -> ValueReport:
    """Aggregate per-path values into a mean/SE report with the tail bound."""
    n = len(values.reward)
    total = values.closed if use_closed else values.total
    mean = float(total.mean())
    se = float(total.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    params = batch.params
    level_proxy = 1.0 + params.c0 * params.c0 / 2.0
    if batch.n_events:
        ends = np.maximum(batch.offsets[1:], 1) - 1
        level_proxy += float(np.abs(params.p_tilde + batch.s[ends]).mean())
    tail = math.exp(-params.r * batch.horizon) * level_proxy
    reward_mean = float(values.reward.mean())
    risk_mean = float(values.risk.mean())
    if use_closed:
        return ValueReport(mean + risk_mean, risk_mean, mean, se, n, tail)
    return ValueReport(reward_mean, risk_mean, mean, se, n, tail)


def paired_se(x: np.ndarray, y: np.ndarray) -> float:
    """SE of mean(x - y) -- the combined error of two common-path estimates."""
    d = x - y
    n = len(d)
    return float(d.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0


def scenario_bank(
    params: ModelParams, mc: McConfig, n_paths: Optional[int] = None
) -> SampleBank:
    cfg = McConfig(
        n_samples=n_paths if n_paths is not None else mc.n_samples,
        eps_trunc=mc.eps_trunc,
        seed=mc.seed,
        stream=mc.stream,
    )
    return make_bank(params, cfg)


# ---------------------------------------------------------------------------
# policy variants for dominance checks
# ---------------------------------------------------------------------------

def shifted(grid: EventGrid, offset: float) -> EventGrid:
    """Barrier shifted by a constant (the no-investment region stays dead)."""
    return EventGrid(
        grid.lat + offset,
        grid.lrt + offset,
        grid.proj_at,
        grid.proj_rt,
        grid.l0 + offset if math.isfinite(grid.l0) else grid.l0,
    )


def no_trade(grid: EventGrid) -> EventGrid:
    """Never move: every barrier value is absorbing-low."""
    return EventGrid(
        np.full_like(grid.lat, NEG_INF),
        np.full_like(grid.lrt, NEG_INF),
        grid.proj_at,
        grid.proj_rt,
        NEG_INF,
    )


def right_jump_only(grid: EventGrid) -> EventGrid:
    """Suppress the proactive instant move; react only just after events."""
    return EventGrid(
        np.full_like(grid.lat, NEG_INF),
        np.maximum(grid.lat, grid.lrt),
        grid.proj_at,
        grid.proj_rt,
        grid.l0,
    )


def delayed_one_event(batch: PathBatch, grid: EventGrid) -> EventGrid:
    """React after each event with the targets known at the previous one.

    Event j's post-event move uses the barrier information of event j-1 (the
    time-0 target for j = 1); instant moves are dropped.  This is the optimal
    policy lagged by one event, a valid (suboptimal) adapted policy.
    """
    lagged = np.empty_like(grid.lrt)
    total = len(lagged)
    if total:
        best = np.maximum(grid.lat, grid.lrt)
        lagged[1:] = best[:-1]
        firsts = batch.offsets[:-1]
        firsts = firsts[firsts < total]
        lagged[firsts] = grid.l0
    return EventGrid(
        np.full_like(grid.lat, NEG_INF),
        lagged,
        grid.proj_at,
        grid.proj_rt,
        NEG_INF,
    )


def true_reward(grid: EventGrid) -> EventGrid:
    """Weight moves by the true discounted reward instead of the observable
    one (the projection-identity cross-check)."""
    return EventGrid(grid.lat, grid.lrt, grid.proj_rt, grid.proj_rt, grid.l0)


# ---------------------------------------------------------------------------
# right-continuous relaxation
# ---------------------------------------------------------------------------

def relaxation_values(batch: PathBatch, grid: EventGrid, k: int) -> tuple:
    """Per-path (value of the ladlag policy, value of its delayed twin).

    The twin executes every post-event move 1/k later (clipped at the
    horizon); its reward weights the delayed move by the then-current
    discounted level, and its risk charges atoms landing inside a delay
    window at the not-yet-raised level.  Vectorized equivalent of
    ``cadlag_approximation`` + ``value_of_control`` over the whole bank.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    params = batch.params
    c0, p0, r = params.c0, params.p_tilde, params.r
    offsets, t, disc = batch.offsets, batch.t, batch.disc
    n = batch.n_paths
    total = batch.n_events
    start, cat, crt = kernels.path_levels(
        offsets,
        np.ascontiguousarray(grid.lat),
        np.ascontiguousarray(grid.lrt),
        grid.l0,
        c0,
    )
    counts = np.diff(offsets)
    pid = np.repeat(np.arange(n), counts)
    cleft = np.empty(total)
    if total:
        cleft[1:] = crt[:-1]
        firsts = offsets[:-1][counts > 0]
        cleft[firsts] = start[pid[firsts]]
    d_at = cat - cleft
    d_rt = crt - cat

    def seg_sum(values: np.ndarray) -> np.ndarray:
        out = np.zeros(n)
        if total:
            np.add.at(out, pid, values)
        return out

    v0_reward = (start - c0) * p0
    reward = v0_reward + seg_sum(d_at * grid.proj_at + d_rt * grid.proj_rt)
    risk = seg_sum(disc * cat * cat / 2.0)
    v_ladlag = reward - risk

    # delayed twin: spans keep per-path searches disjoint
    span = batch.horizon + 2.0 / k + 1.0
    t_shift = t + pid * span
    u = np.minimum(t + 1.0 / k, batch.horizon)
    u_shift = u + pid * span
    post = p0 + batch.s
    # level and discount at the delayed execution times
    pos = np.searchsorted(t_shift, u_shift, side="right") - 1
    exec_level = post[pos] if total else post
    exec_weight = exec_level * np.exp(-r * u)
    # post-event moves still pending at atom m: events j < m with t_j > t_m - 1/k
    prefix = np.concatenate(([0.0], np.cumsum(d_rt)))
    seg_first = offsets[:-1][pid] if total else offsets[:0]
    executed = np.searchsorted(t_shift, (t - 1.0 / k) + pid * span, side="right")
    pending = prefix[np.arange(total)] - prefix[np.maximum(executed, seg_first)]
    tilde_level = cat - pending
    reward_tilde = v0_reward + seg_sum(d_at * grid.proj_at + d_rt * exec_weight)
    risk_tilde = seg_sum(disc * tilde_level * tilde_level / 2.0)
    v_tilde = reward_tilde - risk_tilde
    return v_ladlag, v_tilde
