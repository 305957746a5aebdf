"""Quotients for the symmetric-definite pencil ``A x = lambda B x``.

The relevant moments are ``Bu.Bu``, ``Au.Bu`` and ``Au.Au``; with ``B = I``
everything reduces to :mod:`homorq.rqcore`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    DomainError,
    SymOperator,
    as_operator,
    as_vector,
    check_positive_definite,
    check_symmetric,
)
from .projective import INFINITY, is_infinite
from .rqcore import collinear_ratio, homogeneous_from_moments, roots_from_moments


@dataclass(frozen=True)
class OperatorPencil:
    A: SymOperator
    B: SymOperator

    def __post_init__(self):
        if self.A.dim != self.B.dim:
            raise DomainError("pencil operators differ in dimension")

    @classmethod
    def create(cls, A, B, validate=True):
        pencil = cls(as_operator(A), as_operator(B))
        if validate:
            if not (check_symmetric(pencil.A) and check_symmetric(pencil.B)):
                raise DomainError("pencil operators must be symmetric")
            if not check_positive_definite(pencil.B):
                raise DomainError("B must be positive definite")
        return pencil

    @property
    def dim(self):
        return self.A.dim


def _pencil(P):
    if isinstance(P, OperatorPencil):
        return P
    A, B = P
    return OperatorPencil.create(A, B)


def gen_moments(P, u):
    """Return ``(Bu.Bu, Au.Bu, Au.Au, Au, Bu)``."""
    P = _pencil(P)
    u = as_vector(u, P.dim)
    if not np.any(u):
        raise DomainError("trial vector must be nonzero")
    Au, Bu = P.A.apply(u), P.B.apply(u)
    return float(Bu @ Bu), float(Au @ Bu), float(Au @ Au), Au, Bu


def gen_rayleigh(P, u):
    """``u.ABu / u.B^2u``, the minimizer of ``||Au - gamma Bu||``."""
    p, q, _, Au, Bu = gen_moments(P, u)
    c = collinear_ratio(Bu, Au)
    return q / p if c is None else c


def gen_harmonic(P, u):
    p, q, r, Au, Bu = gen_moments(P, u)
    if q == 0.0:
        return INFINITY
    c = collinear_ratio(Bu, Au)
    return r / q if c is None else c


def gen_homogeneous_pair(P, u):
    """Canonical minimizer of ``||a1 Bu - a2 Au||`` on the unit circle, with ``mu``."""
    p, q, r, Au, Bu = gen_moments(P, u)
    pair, mu = homogeneous_from_moments(p, q, r)
    return pair, (0.0 if collinear_ratio(Bu, Au) is not None else mu)


def gen_homogeneous_rq(P, u):
    p, q, r, Au, Bu = gen_moments(P, u)
    c = collinear_ratio(Bu, Au)
    return homogeneous_from_moments(p, q, r)[0].value if c is None else c


def gen_quadratic_roots(P, u):
    p, q, r, Au, Bu = gen_moments(P, u)
    sel, other = roots_from_moments(p, q, r)
    c = collinear_ratio(Bu, Au)
    return (sel, other) if c is None else (c, -1.0 / c)


def gen_galerkin_defect(P, u, alpha):
    """``u.(alpha A + B)(A - alpha B)u``, zero at both roots."""
    _, _, _, Au, Bu = gen_moments(P, u)
    return float((alpha * Au + Bu) @ (Au - alpha * Bu))


def gen_chordal_bound(P, u, alpha, lambda1_B, lam):
    """Upper bound on ``chordal(lam, alpha)`` for the eigenvalue ``lam`` nearest ``alpha``.

    ``lambda1_B`` is the smallest eigenvalue of ``B``, supplied by the caller.
    """
    if not lambda1_B > 0:
        raise DomainError("lambda1_B must be positive")
    if is_infinite(alpha) or is_infinite(lam):
        raise DomainError("chordal bound needs finite alpha and lambda")
    _, _, _, Au, Bu = gen_moments(P, u)
    u = np.asarray(u, dtype=float)
    res = float(np.linalg.norm(Au - alpha * Bu))
    return res / (lambda1_B * math.sqrt(1.0 + lam**2) * float(np.linalg.norm(u)) * math.sqrt(1.0 + alpha**2))


def chordal_bound(A, u, alpha, lam):
    """Standard-problem bound: the ``B = I`` case of :func:`gen_chordal_bound`."""
    A = as_operator(A)
    return gen_chordal_bound(OperatorPencil(A, _identity_like(A)), u, alpha, 1.0, lam)


def _identity_like(A):
    return SymOperator(lambda v: v.copy(), A.dim)
