"""Standard, harmonic and homogeneous Rayleigh quotients of a symmetric operator.

Every quotient here depends on ``u`` only through the three moments
``p = u.u``, ``q = u.Au`` and ``r = Au.Au``; the generalized pencil variants in
:mod:`homorq.gep` reuse :func:`homogeneous_from_moments` with ``Bu`` in place
of ``u``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import DomainError, as_operator, as_vector
from .projective import INFINITY, HomogeneousPair, is_infinite


def _prepare(A, u):
    A = as_operator(A)
    u = as_vector(u, A.dim)
    if not np.any(u):
        raise DomainError("trial vector must be nonzero")
    return A, u


def moments(A, u):
    """Return ``(u.u, u.Au, Au.Au, Au)``."""
    A, u = _prepare(A, u)
    Au = A.apply(u)
    return float(u @ u), float(u @ Au), float(Au @ Au), Au


def collinear_ratio(v, w):
    """``c`` with ``w == c v`` when ``v`` and ``w`` are exactly parallel and nonzero, else ``None``.

    Exact eigenvector inputs then return the eigenvalue as a single quotient
    of components instead of a ratio of inner products.
    """
    k = int(np.argmax(np.abs(v)))
    vk, wk = v[k], w[k]
    if vk == 0.0 or wk == 0.0:
        return None
    if np.array_equal(wk * v, vk * w):
        return float(wk / vk)
    return None


def rayleigh(A, u):
    """Standard Rayleigh quotient ``u.Au / u.u``."""
    p, q, _, Au = moments(A, u)
    c = collinear_ratio(np.asarray(u, dtype=float), Au)
    return q / p if c is None else c


def harmonic_rayleigh(A, u):
    """Harmonic Rayleigh quotient ``Au.Au / u.Au``; ``INFINITY`` if ``u.Au == 0``."""
    _, q, r, Au = moments(A, u)
    if q == 0.0:
        return INFINITY
    c = collinear_ratio(np.asarray(u, dtype=float), Au)
    return r / q if c is None else c


def harmonic_rayleigh_target(A, u, tau):
    """Harmonic Rayleigh quotient with target ``tau``.

    Returns ``None`` (undefined) when ``u.(A - tau I)u`` vanishes.
    """
    A, u = _prepare(A, u)
    Au = A.apply(u)
    w = Au - tau * u
    den = float(w @ u)
    if den == 0.0:
        return None
    return float(w @ Au) / den


def homogeneous_from_moments(p, q, r):
    """Minimize ``||a1 v - a2 w||`` over the unit circle given the Gram entries.

    ``p = v.v``, ``q = v.w``, ``r = w.w``; returns ``(pair, mu)`` where ``mu``
    is the smallest eigenvalue of ``[[p, -q], [-q, r]]``.
    """
    if q == 0.0:
        # diagonal Gram matrix: the argmin is the axis with the smaller entry
        if r <= p:
            return HomogeneousPair(0.0, 1.0), r
        return HomogeneousPair(1.0, 0.0), p
    d = p - r
    root = math.hypot(d, 2.0 * q)
    mu = max(0.5 * (p + r - root), 0.0)
    # eigenvector (a1, a2) ~ (alpha, 1); pick the cancellation-free form
    if d <= 0.0:
        pair = HomogeneousPair.from_coords(root - d, 2.0 * q)
    else:
        pair = HomogeneousPair.from_coords(2.0 * q, root + d)
    return pair, mu


def homogeneous_pair(A, u):
    """Canonical minimizer of the homogeneous residual and the value ``mu``."""
    p, q, r, Au = moments(A, u)
    if collinear_ratio(np.asarray(u, dtype=float), Au) is not None:
        return homogeneous_from_moments(p, q, r)[0], 0.0
    return homogeneous_from_moments(p, q, r)


def homogeneous_rq(A, u):
    """Homogeneous Rayleigh quotient ``a1 / a2`` (``INFINITY`` when ``a2 == 0``)."""
    p, q, r, Au = moments(A, u)
    c = collinear_ratio(np.asarray(u, dtype=float), Au)
    return homogeneous_from_moments(p, q, r)[0].value if c is None else c


def roots_from_moments(p, q, r):
    """Roots of ``q t^2 + (p - r) t - q = 0`` as ``(selected, other)``.

    ``selected`` has the sign of ``q``; the roots multiply to ``-1``.
    """
    if q == 0.0:
        raise DomainError("quadratic is degenerate when u.Au == 0")
    d = p - r
    root = math.hypot(d, 2.0 * q)
    if d <= 0.0:
        sel = (root - d) / (2.0 * q)
    else:
        sel = 2.0 * q / (root + d)
    return sel, -1.0 / sel


def quadratic_roots(A, u):
    p, q, r, Au = moments(A, u)
    sel, other = roots_from_moments(p, q, r)
    c = collinear_ratio(np.asarray(u, dtype=float), Au)
    return (sel, other) if c is None else (c, -1.0 / c)


def galerkin_defect(A, u, alpha):
    """``u.(A + I/alpha)(A - alpha I)u``; vanishes at the roots of the quadratic."""
    if alpha == 0.0:
        raise DomainError("alpha must be nonzero")
    A, u = _prepare(A, u)
    Au = A.apply(u)
    return float((Au + u / alpha) @ (Au - alpha * u))


def residuals(A, u, gamma):
    """``(||Au - gamma u||, ||Au / gamma - u||)``."""
    if gamma == 0.0:
        raise DomainError("harmonic residual needs gamma != 0")
    A, u = _prepare(A, u)
    Au = A.apply(u)
    return float(np.linalg.norm(Au - gamma * u)), float(np.linalg.norm(Au / gamma - u))


def homogeneous_residual(A, u, pair):
    """``||a1 u - a2 Au|| / |(a1, a2)|``."""
    A, u = _prepare(A, u)
    Au = A.apply(u)
    return float(np.linalg.norm(pair.a1 * u - pair.a2 * Au)) / math.hypot(pair.a1, pair.a2)


@dataclass(frozen=True)
class QuotientReport:
    theta: float
    theta_harmonic: object
    alpha_pair: HomogeneousPair
    alpha: object
    mu: float
    res_standard: float
    res_harmonic: float
    res_homogeneous: float

    def as_dict(self):
        return {
            "theta": self.theta,
            "theta_harmonic": self.theta_harmonic,
            "alpha": self.alpha,
            "alpha1": self.alpha_pair.a1,
            "alpha2": self.alpha_pair.a2,
            "mu": self.mu,
            "res_standard": self.res_standard,
            "res_harmonic": self.res_harmonic,
            "res_homogeneous": self.res_homogeneous,
        }


def quotient_report(A, u):
    """All three quotients of ``(A, u)`` with residuals at their optimal arguments."""
    A, u = _prepare(A, u)
    Au = A.apply(u)
    p, q, r = float(u @ u), float(u @ Au), float(Au @ Au)
    theta = q / p
    theta_h = INFINITY if q == 0.0 else r / q
    pair, mu = homogeneous_from_moments(p, q, r)
    alpha = pair.value
    c = collinear_ratio(u, Au)
    if c is not None:
        theta = theta_h = alpha = c
        mu = 0.0
    res_std = float(np.linalg.norm(Au - theta * u))
    if is_infinite(theta_h):
        res_harm = float(np.linalg.norm(u))
    else:
        res_harm = float(np.linalg.norm(Au / theta_h - u))
    res_hom = float(np.linalg.norm(pair.a1 * u - pair.a2 * Au))
    return QuotientReport(theta, theta_h, pair, alpha, mu, res_std, res_harm, res_hom)
