"""Construction of the optimal monotone control.

The optimal control is the running supremum of the barrier process, floored
at the starting position: it moves at an event instant when the barrier
evaluated on the observable state sets a new record, and again just after the
event when the post-jump barrier does.  Both moves at once produce the double
jumps characteristic of sensor information; neither one-sided continuity
holds in general.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

from .barrier import BarrierTable
from .paths import EventPath
from .sensor import ObservedPath


@dataclass(frozen=True)
class BarrierPath:
    """Realized barrier along one observed path.

    ``l0`` is the value on [0, t_1); ``entries`` hold (t, L_at, L_right) per
    event; between events the barrier is constant at the previous L_right.
    NEG_INF marks the no-investment region of the perfect sensor.
    """

    l0: float
    entries: tuple
    horizon: float


@dataclass(frozen=True)
class LadlagControl:
    """Monotone control with triple values at its breakpoints.

    ``breakpoints`` is an ordered tuple of (t, C_left, C_at, C_right);
    between breakpoints the control is constant (equal to the previous
    C_right), and C_{0-} = c0.  Breakpoints with zero net movement are
    pruned at construction.
    """

    c0: float
    breakpoints: tuple
    horizon: float

    def __post_init__(self):
        run = self.c0
        last_t = -math.inf
        for (t, left, at, right) in self.breakpoints:
            if t <= last_t:
                raise ValueError("breakpoint times must be strictly increasing")
            if not (run <= left + 1e-12 and left <= at <= right):
                raise ValueError(
                    f"control not monotone at t={t}: {run} -> ({left}, {at}, {right})"
                )
            if left != run:
                raise ValueError(f"left value at t={t} must equal running level")
            run = right
            last_t = t

    @property
    def terminal(self) -> float:
        return self.breakpoints[-1][3] if self.breakpoints else self.c0

    def level_at(self, t: float, side: str = "at") -> float:
        """Control level at time t (side = left | at | right)."""
        run = self.c0
        for (tk, left, at, right) in self.breakpoints:
            if tk < t:
                run = right
            elif tk == t:
                return {"left": left, "at": at, "right": right}[side]
            else:
                break
        return run

    def increments(self) -> Iterable[tuple]:
        """Yield (t, kind, size) for every nonzero jump, kind in {at, right}."""
        for (t, left, at, right) in self.breakpoints:
            if at > left:
                yield (t, "at", at - left)
            if right > at:
                yield (t, "right", right - at)

    def to_csv_rows(self) -> list:
        return [(t, left, at, right) for (t, left, at, right) in self.breakpoints]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "C_left", "C_at", "C_right"])
            writer.writerows(self.to_csv_rows())


def barrier_path(obs: ObservedPath, table: BarrierTable) -> BarrierPath:
    """Evaluate the barrier along an observed path.

    Detected event: L_at = ell(post, 1), the controller may act on the jump
    before the risk tick.  Undetected event: L_at = ell(pre, 0), nothing new
    is known at the instant itself.  Either way L_right = ell(post, 0): just
    after the event the level is plainly visible.
    """
    if not math.isinf(table.eta) and table.eta != obs.eta:
        raise ValueError(
            f"table built for eta={table.eta} queried with a path observed at eta={obs.eta}"
        )
    if math.isinf(table.eta) and not math.isinf(obs.eta):
        raise ValueError("predictable table requires an eta=inf observation")
    path = obs.path
    level = path.p_tilde
    entries = []
    for k, (t, _) in enumerate(path.events):
        post = obs.post[k]
        if obs.detected[k]:
            l_at = table.value(post, 1)
        else:
            l_at = table.value(level, 0)
        l_right = table.value(post, 0)
        entries.append((t, l_at, l_right))
        level = post
    return BarrierPath(table.value(path.p_tilde, 0), tuple(entries), path.horizon)


def running_sup_control(L: BarrierPath, c0: float) -> LadlagControl:
    """c0 floor-joined running supremum of the barrier path.

    The time-0 adjustment (if any) is a left jump at 0; afterwards the
    control can move at event instants and just after them.  NEG_INF barrier
    values never raise the supremum.
    """
    breakpoints = []
    run = c0
    start = max(c0, L.l0)
    if start > run:
        breakpoints.append((0.0, c0, start, start))
        run = start
    for (t, l_at, l_right) in L.entries:
        c_at = max(run, l_at)
        c_right = max(c_at, l_right)
        if c_right > run:
            breakpoints.append((t, run, c_at, c_right))
            run = c_right
    return LadlagControl(c0, tuple(breakpoints), L.horizon)


def toy_control(path: EventPath, eta: float) -> tuple:
    """Bang-bang sensor action per event: sign of detected marks, else 0."""
    actions = []
    for (_, y) in path.events:
        if abs(y) >= eta and y != 0.0:
            actions.append(1 if y > 0 else -1)
        else:
            actions.append(0)
    return tuple(actions)


def constant_control(c0: float, horizon: float) -> LadlagControl:
    """The no-trade control C == c0."""
    return LadlagControl(c0, (), horizon)
