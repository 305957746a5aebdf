"""Keyed random streams for reproducible experiments.

Each stream is a Philox counter-based generator seeded from a tuple key
(master seed first, then stream identifiers), so any cell of an experiment
can be regenerated independently of evaluation order. Normals use
Box-Muller on the raw 64-bit output rather than numpy's distribution code,
keeping the values independent of the numpy version.
"""
from __future__ import annotations

import numpy as np

_TWO_PI = 2.0 * np.pi


def stream(*key):
    """Philox bit generator for the integer key ``(master, *ids)``."""
    key = tuple(int(k) for k in key)
    if any(k < 0 for k in key):
        raise ValueError("stream keys must be nonnegative integers")
    return np.random.Philox(np.random.SeedSequence(list(key)))


def uniforms(key, size):
    """``size`` doubles in ``(0, 1]`` from the stream for ``key``."""
    raw = stream(*key).random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 1.0) * (1.0 / 9007199254740992.0)


def standard_normals(key, size):
    """``size`` standard normal draws by the Box-Muller transform."""
    m = (size + 1) // 2
    u = uniforms(key, 2 * m)
    radius = np.sqrt(-2.0 * np.log(u[:m]))
    angle = _TWO_PI * u[m:]
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:size]
