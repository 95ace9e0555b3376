"""Jump detection with a threshold sensor.

A sensor with threshold eta alerts on jumps of absolute size at least eta.
eta = 0 is the perfect sensor (react to every jump as it happens), eta = inf
is no sensor at all (react only after jumps).  What the controller sees is the
observable reward: the post-jump level at detected events, the pre-jump level
at missed ones, and the true level everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .paths import EventPath, JumpLaw, Side

ETA_OPTIONAL = 0.0
ETA_PREDICTABLE = math.inf


@dataclass(frozen=True)
class SensorSpec:
    """Detection threshold; 0 and inf are the perfect/absent sentinels."""

    eta: float

    def __post_init__(self):
        if self.eta < 0 or math.isnan(self.eta):
            raise ValueError(f"eta must be in [0, inf], got {self.eta}")

    def detects(self, mark: float) -> bool:
        return abs(mark) >= self.eta


def failure_prob(law: JumpLaw, eta: float) -> float:
    """P(|Y| < eta): the chance the sensor misses a jump."""
    if eta < 0 or math.isnan(eta):
        raise ValueError(f"eta must be in [0, inf], got {eta}")
    return law.abs_cdf_strict(eta)


@dataclass(frozen=True)
class ObservedPath:
    """A path re-read through a sensor.

    ``detected[k]`` is True iff |y_k| >= eta.  ``obs_at[k]`` is the observable
    (undiscounted) reward level at event k: post-jump when detected, pre-jump
    when missed.  ``post[k]`` is the true post-jump level, which is also the
    observable right limit at the event.
    """

    path: EventPath
    eta: float
    detected: tuple
    obs_at: tuple
    post: tuple

    @property
    def horizon(self) -> float:
        return self.path.horizon


def observe(path: EventPath, sensor: SensorSpec) -> ObservedPath:
    detected = []
    obs_at = []
    post = []
    level = path.p_tilde
    for _, y in path.events:
        hit = sensor.detects(y)
        detected.append(hit)
        new_level = level + y
        obs_at.append(new_level if hit else level)
        post.append(new_level)
        level = new_level
    return ObservedPath(path, sensor.eta, tuple(detected), tuple(obs_at), tuple(post))


def projected_reward(obs: ObservedPath, t: float, r: float, side: Side = "at") -> float:
    """Discounted observable reward at time t.

    side = 'at' applies the sensor rule at event times; side = 'right' is the
    right limit (always the true post-jump level); side = 'left' the left
    limit.  Away from events all three coincide with the true discounted
    level.
    """
    path = obs.path
    if not 0.0 <= t <= path.horizon:
        raise ValueError(f"t={t} outside [0, {path.horizon}]")
    level = path.p_tilde
    at_event = None
    for k, (tk, _) in enumerate(path.events):
        if tk < t:
            level = obs.post[k]
        elif tk == t:
            at_event = k
            break
        else:
            break
    disc = math.exp(-r * t)
    if at_event is None:
        return level * disc
    k = at_event
    if side == "left":
        return level * disc
    if side == "right":
        return obs.post[k] * disc
    return obs.obs_at[k] * disc


def detect_flags(marks: np.ndarray, eta: float) -> np.ndarray:
    """Vectorized detection indicator |y| >= eta as float64 (0.0 / 1.0)."""
    return (np.abs(marks) >= eta).astype(np.float64)
