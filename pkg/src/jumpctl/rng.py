"""Seeded random-number streams.

One master seed drives every experiment. Each logical consumer (calibration
bank, scenario bank, value sweep, toy sweep, ...) gets its own named stream so
that, e.g., enlarging the calibration bank never perturbs scenario paths.
The mapping ``(seed, name) -> bit stream`` is part of the reproducibility
contract: streams are derived via ``numpy.random.SeedSequence([seed, crc32(name)])``
feeding the default PCG64 generator, which is stable across platforms.
"""

from __future__ import annotations

import zlib

import numpy as np

#: Stream names used by the toolkit itself.
CALIBRATION = "calibration"
CALIBRATION_CHECK = "calibration-check"
SCENARIO = "scenario"
VALUE_SWEEP = "value-sweep"
TOY = "toy"


def stream(seed: int, name: str) -> np.random.Generator:
    """Return the deterministic generator for (master seed, stream name)."""
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be a u64, got {seed!r}")
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))
