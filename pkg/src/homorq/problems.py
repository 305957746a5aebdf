"""Unconstrained test problems with analytic gradients and standard start points.

Definitions follow Andrei's unconstrained test collection, the
More-Garbow-Hillstrom set (Extended Powell, Extended Rosenbrock) and
Raydan's Strictly Convex 2. Problems are stateless; any caching of
function values is done by the solver.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operators import DomainError, as_operator


@dataclass(frozen=True)
class Problem:
    name: str
    dim: int
    objective: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    start: np.ndarray
    scale_by_g0: bool = False
    scale: float = 1.0

    def __call__(self, x):
        return self.objective(x)


def _make(name, n, f, g, x0, scale_by_g0=False):
    x0 = np.asarray(x0, dtype=float)
    if not scale_by_g0:
        return Problem(name, n, f, g, x0)
    c = float(np.linalg.norm(g(x0)))
    if c == 0.0:
        raise DomainError(f"{name}: zero gradient at the start point, cannot scale")
    return Problem(name, n, lambda x: f(x) / c, lambda x: g(x) / c, x0, True, c)


def _check_block(name, n, block):
    if n < block or n % block:
        raise DomainError(f"{name} needs a dimension divisible by {block}, got {n}")


def _index(n):
    return np.arange(1, n + 1, dtype=float)


def diagonal1(n):
    i = _index(n)

    def f(x):
        return float(np.sum(np.exp(x) - i * x))

    def g(x):
        return np.exp(x) - i

    return _make("Diagonal 1", n, f, g, np.full(n, 1.0 / n))


def diagonal2(n):
    i = _index(n)

    def f(x):
        return float(np.sum(np.exp(x) - x / i))

    def g(x):
        return np.exp(x) - 1.0 / i

    return _make("Diagonal 2", n, f, g, 1.0 / i)


def diagonal3(n):
    i = _index(n)

    def f(x):
        return float(np.sum(np.exp(x) - i * np.sin(x)))

    def g(x):
        return np.exp(x) - i * np.cos(x)

    return _make("Diagonal 3", n, f, g, np.ones(n))


def hager(n):
    si = np.sqrt(_index(n))

    def f(x):
        return float(np.sum(np.exp(x) - si * x))

    def g(x):
        return np.exp(x) - si

    return _make("Hager", n, f, g, np.ones(n))


def strictly_convex2(n):
    w = _index(n) / 10.0

    def f(x):
        return float(np.sum(w * (np.exp(x) - x)))

    def g(x):
        return w * (np.exp(x) - 1.0)

    return _make("Strictly Convex 2", n, f, g, np.ones(n))


def perturbed_quadratic(n):
    i = _index(n)

    def f(x):
        return float(np.sum(i * x**2) + 0.01 * np.sum(x) ** 2)

    def g(x):
        return 2.0 * i * x + 0.02 * np.sum(x)

    return _make("Perturbed quadratic", n, f, g, np.full(n, 0.5))


def extended_rosenbrock(n, c=100.0):
    _check_block("Extended Rosenbrock", n, 2)

    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(c * (b - a**2) ** 2 + (1.0 - a) ** 2))

    def g(x):
        a, b = x[0::2], x[1::2]
        t = b - a**2
        out = np.empty_like(x)
        out[0::2] = -4.0 * c * a * t - 2.0 * (1.0 - a)
        out[1::2] = 2.0 * c * t
        return out

    return _make("Extended Rosenbrock", n, f, g, np.tile([-1.2, 1.0], n // 2))


def extended_white_holst(n, c=100.0):
    _check_block("Extended White and Holst", n, 2)

    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(c * (b - a**3) ** 2 + (1.0 - a) ** 2))

    def g(x):
        a, b = x[0::2], x[1::2]
        t = b - a**3
        out = np.empty_like(x)
        out[0::2] = -6.0 * c * a**2 * t - 2.0 * (1.0 - a)
        out[1::2] = 2.0 * c * t
        return out

    return _make("Extended White and Holst", n, f, g, np.tile([-1.2, 1.0], n // 2))


def extended_beale(n):
    _check_block("Extended Beale", n, 2)

    def terms(x):
        a, b = x[0::2], x[1::2]
        t1 = 1.5 - a * (1.0 - b)
        t2 = 2.25 - a * (1.0 - b**2)
        t3 = 2.625 - a * (1.0 - b**3)
        return a, b, t1, t2, t3

    def f(x):
        _, _, t1, t2, t3 = terms(x)
        return float(np.sum(t1**2 + t2**2 + t3**2))

    def g(x):
        a, b, t1, t2, t3 = terms(x)
        out = np.empty_like(x)
        out[0::2] = -2.0 * (t1 * (1.0 - b) + t2 * (1.0 - b**2) + t3 * (1.0 - b**3))
        out[1::2] = 2.0 * a * (t1 + 2.0 * t2 * b + 3.0 * t3 * b**2)
        return out

    return _make("Extended Beale", n, f, g, np.tile([1.0, 0.8], n // 2))


def extended_powell(n):
    _check_block("Extended Powell", n, 4)

    def f(x):
        a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
        return float(np.sum((a + 10.0 * b) ** 2 + 5.0 * (c - d) ** 2 + (b - 2.0 * c) ** 4 + 10.0 * (a - d) ** 4))

    def g(x):
        a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
        t1, t2, t3, t4 = a + 10.0 * b, c - d, (b - 2.0 * c) ** 3, (a - d) ** 3
        out = np.empty_like(x)
        out[0::4] = 2.0 * t1 + 40.0 * t4
        out[1::4] = 20.0 * t1 + 4.0 * t3
        out[2::4] = 10.0 * t2 - 8.0 * t3
        out[3::4] = -10.0 * t2 - 40.0 * t4
        return out

    return _make("Extended Powell", n, f, g, np.tile([3.0, -1.0, 0.0, 1.0], n // 4), scale_by_g0=True)


def generalized_rosenbrock(n, c=100.0):
    if n < 2:
        raise DomainError("Generalized Rosenbrock needs n >= 2")

    def f(x):
        t = x[1:] - x[:-1] ** 2
        return float(np.sum(c * t**2 + (1.0 - x[:-1]) ** 2))

    def g(x):
        t = x[1:] - x[:-1] ** 2
        out = np.zeros_like(x)
        out[:-1] = -4.0 * c * x[:-1] * t - 2.0 * (1.0 - x[:-1])
        out[1:] += 2.0 * c * t
        return out

    x0 = np.tile([-1.2, 1.0], (n + 1) // 2)[:n]
    return _make("Generalized Rosenbrock", n, f, g, x0, scale_by_g0=True)


def generalized_white_holst(n, c=100.0):
    if n < 2:
        raise DomainError("Generalized White and Holst needs n >= 2")

    def f(x):
        t = x[1:] - x[:-1] ** 3
        return float(np.sum(c * t**2 + (1.0 - x[:-1]) ** 2))

    def g(x):
        t = x[1:] - x[:-1] ** 3
        out = np.zeros_like(x)
        out[:-1] = -6.0 * c * x[:-1] ** 2 * t - 2.0 * (1.0 - x[:-1])
        out[1:] += 2.0 * c * t
        return out

    x0 = np.tile([-1.2, 1.0], (n + 1) // 2)[:n]
    return _make("Generalized White and Holst", n, f, g, x0, scale_by_g0=True)


def full_hessian1(n):
    # residuals r_i = x1 - 3 - 2 S_i^2 for i >= 2, S_i the partial sums
    if n < 2:
        raise DomainError("Full Hessian FH1 needs n >= 2")

    def f(x):
        s = np.cumsum(x)[1:]
        r = x[0] - 3.0 - 2.0 * s**2
        return float((x[0] - 3.0) ** 2 + np.sum(r**2))

    def g(x):
        s = np.cumsum(x)[1:]
        r = x[0] - 3.0 - 2.0 * s**2
        w = -8.0 * r * s
        out = np.empty_like(x)
        out[1:] = np.cumsum(w[::-1])[::-1]
        out[0] = 2.0 * (x[0] - 3.0) + np.sum(2.0 * r + w)
        return out

    return _make("Full Hessian FH1", n, f, g, np.full(n, 0.01))


def full_hessian2(n):
    if n < 2:
        raise DomainError("Full Hessian FH2 needs n >= 2")

    def f(x):
        s = np.cumsum(x)[1:]
        return float((x[0] - 5.0) ** 2 + np.sum((s - 1.0) ** 2))

    def g(x):
        w = 2.0 * (np.cumsum(x)[1:] - 1.0)
        out = np.empty_like(x)
        out[1:] = np.cumsum(w[::-1])[::-1]
        out[0] = 2.0 * (x[0] - 5.0) + np.sum(w)
        return out

    return _make("Full Hessian FH2", n, f, g, np.full(n, 0.01))


def quadratic(A, b=None, x0=None, name="Quadratic"):
    """``f(x) = x.Ax / 2 - b.x`` for a symmetric positive definite operator ``A``."""
    A = as_operator(A)
    n = A.dim
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    x0 = np.ones(n) if x0 is None else np.asarray(x0, dtype=float)

    def f(x):
        return float(0.5 * (x @ A.apply(x)) - b @ x)

    def g(x):
        return A.apply(x) - b

    return _make(name, n, f, g, x0)


# canonical name -> (constructor, extra aliases)
_REGISTRY = {
    "Diagonal 1": (diagonal1, ()),
    "Diagonal 2": (diagonal2, ()),
    "Diagonal 3": (diagonal3, ()),
    "Extended Beale": (extended_beale, ("Ext Beale",)),
    "Extended Powell": (extended_powell, ("Ext Powell",)),
    "Extended Rosenbrock": (extended_rosenbrock, ("Ext Rosen",)),
    "Extended White and Holst": (extended_white_holst, ("Ext WH",)),
    "Full Hessian FH1": (full_hessian1, ("FH1",)),
    "Full Hessian FH2": (full_hessian2, ("FH2",)),
    "Generalized Rosenbrock": (generalized_rosenbrock, ("Gen Rosen",)),
    "Generalized White and Holst": (generalized_white_holst, ("Gen WH",)),
    "Hager": (hager, ()),
    "Perturbed quadratic": (perturbed_quadratic, ("Pert quad",)),
    "Strictly Convex 2": (strictly_convex2, ("S Conv 2",)),
}


def normalize_name(name):
    return re.sub(r"[^a-z0-9]", "", name.lower())


_LOOKUP = {}
for _canon, (_ctor, _aliases) in _REGISTRY.items():
    for _alias in (_canon, *_aliases):
        _LOOKUP[normalize_name(_alias)] = _canon


def registry():
    """Map of canonical problem name to constructor ``ctor(n) -> Problem``."""
    return {name: ctor for name, (ctor, _) in _REGISTRY.items()}


def canonical_name(name):
    try:
        return _LOOKUP[normalize_name(name)]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}") from None


def get_problem(name, n):
    return _REGISTRY[canonical_name(name)][0](n)


def gradient_check(problem, x, h=1e-6):
    """Worst central-difference discrepancy ``|fd_i - g_i| / (1 + |g_i|)``."""
    x = np.asarray(x, dtype=float)
    g = problem.gradient(x)
    worst = 0.0
    e = np.zeros_like(x)
    for i in range(x.size):
        e[i] = h
        fd = (problem.objective(x + e) - problem.objective(x - e)) / (2.0 * h)
        e[i] = 0.0
        worst = max(worst, abs(fd - g[i]) / (1.0 + abs(g[i])))
    return worst
