"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the pure
NumPy/Python implementations when the build is unavailable.  Set
``JUMPCTL_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("JUMPCTL_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

gamma0_transitions = _impl.gamma0_transitions
gamma1_transitions = _impl.gamma1_transitions
hitting_samples = _impl.hitting_samples
runsup_weights = _impl.runsup_weights
path_values = _impl.path_values
path_levels = _impl.path_levels
