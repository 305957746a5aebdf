"""Steplength rules: BB1, BB2, the homogeneous HBB step and adaptive ABB/AHBB.

All rules take the iterate difference ``s`` and gradient difference ``y``.
A rule returns ``None`` when its denominator vanishes; the solver decides
what to do in that case.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class StepPair:
    s: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if s.shape != y.shape:
            raise ValueError("s and y must have equal shapes")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "y", y)

    def products(self):
        """``(s.s, s.y, y.y)``."""
        return float(self.s @ self.s), float(self.s @ self.y), float(self.y @ self.y)


def bb1_from_products(ss, sy, yy):
    return None if sy == 0.0 else ss / sy


def bb2_from_products(ss, sy, yy):
    return None if yy == 0.0 else sy / yy


def hbb_from_products(ss, sy, yy):
    """Inverse homogeneous Rayleigh quotient of the implicit Hessian at ``s``."""
    if sy == 0.0:
        return None
    d = ss - yy
    root = math.hypot(d, 2.0 * sy)
    if d >= 0.0:
        return (d + root) / (2.0 * sy)
    return 2.0 * sy / (root - d)


def bb1(p):
    return bb1_from_products(*p.products())


def bb2(p):
    return bb2_from_products(*p.products())


def hbb(p):
    return hbb_from_products(*p.products())


@dataclass
class AdaptiveState:
    """Windows of the last ``m + 1`` BB2 and HBB steps for ABB/AHBB."""

    eta: float = 0.8
    m: int = 5
    hist_bb2: deque = field(init=False)
    hist_hbb: deque = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        self.hist_bb2 = deque(maxlen=self.m + 1)
        self.hist_hbb = deque(maxlen=self.m + 1)

    def push(self, bb2_k=None, hbb_k=None):
        if bb2_k is not None:
            self.hist_bb2.append(bb2_k)
        if hbb_k is not None:
            self.hist_hbb.append(hbb_k)


def abb(state, bb1_k, bb2_k):
    """ABB: windowed BB2 minimum when ``bb2 < eta * bb1``, otherwise BB1.

    Expects ``bb2_k`` to be in the window already.
    """
    if bb2_k < state.eta * bb1_k:
        return min(state.hist_bb2)
    return bb1_k


def ahbb(state, bb1_k, bb2_k, hbb_k):
    """AHBB: same trigger as ABB, but the minimum runs over the HBB window."""
    if bb2_k < state.eta * bb1_k:
        return min(state.hist_hbb)
    return bb1_k
