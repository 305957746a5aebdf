"""Points of the projective line and the chordal metric on it."""
from __future__ import annotations

import math
from dataclasses import dataclass


class _Infinity:
    """The point at infinity. Deliberately supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinite(value):
    return value is INFINITY


@dataclass(frozen=True)
class HomogeneousPair:
    """Canonical representative ``(a1, a2)`` of a point on the projective line.

    Normalized to unit length with the first nonzero coordinate positive, so
    two pairs describe the same point iff they compare equal (up to rounding).
    """

    a1: float
    a2: float

    @classmethod
    def from_coords(cls, a1, a2):
        a1, a2 = float(a1), float(a2)
        r = math.hypot(a1, a2)
        if r == 0.0 or not math.isfinite(r):
            raise ValueError("homogeneous coordinates must be finite and not both zero")
        a1, a2 = a1 / r, a2 / r
        lead = a1 if a1 != 0.0 else a2
        if lead < 0:
            a1, a2 = -a1, -a2
        # avoid negative zeros in the canonical form
        return cls(a1 + 0.0, a2 + 0.0)

    @classmethod
    def from_value(cls, value):
        if is_infinite(value):
            return cls(1.0, 0.0)
        return cls.from_coords(value, 1.0)

    @property
    def value(self):
        """``a1 / a2``, or ``INFINITY`` when ``a2 == 0``."""
        if self.a2 == 0.0:
            return INFINITY
        return self.a1 / self.a2

    @property
    def is_infinite(self):
        return self.a2 == 0.0


def _coords(x):
    if isinstance(x, HomogeneousPair):
        return x.a1, x.a2
    if is_infinite(x):
        return 1.0, 0.0
    return float(x), 1.0


def chordal_distance(a, b):
    """Chordal distance ``|a - b| / (sqrt(1 + a^2) sqrt(1 + b^2))``.

    Accepts floats, ``INFINITY`` or :class:`HomogeneousPair`; evaluated in
    homogeneous form ``|a1 b2 - a2 b1| / (|(a1, a2)| |(b1, b2)|)``.
    """
    a1, a2 = _coords(a)
    b1, b2 = _coords(b)
    return abs(a1 * b2 - a2 * b1) / (math.hypot(a1, a2) * math.hypot(b1, b2))
