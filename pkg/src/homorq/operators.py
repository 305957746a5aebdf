"""Matrix-free symmetric operators.

All quotient code only needs the action ``v -> A v``, so dense matrices,
diagonal matrices and implicit operators are interchangeable.
"""
from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class SymOperator:
    """Symmetric linear operator given by its action on vectors."""

    def __init__(self, apply, dim):
        if dim < 1:
            raise DomainError("operator dimension must be positive")
        self._apply = apply
        self.dim = int(dim)

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DomainError(f"expected vector of shape ({self.dim},), got {v.shape}")
        return np.asarray(self._apply(v), dtype=float)

    def __matmul__(self, v):
        return self.apply(v)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class DenseOperator(SymOperator):
    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DomainError("dense operator needs a square matrix")
        self.matrix = matrix
        super().__init__(matrix.__matmul__, matrix.shape[0])


class DiagonalOperator(SymOperator):
    def __init__(self, diagonal):
        diagonal = np.asarray(diagonal, dtype=float).ravel()
        self.diagonal = diagonal
        super().__init__(diagonal.__mul__, diagonal.size)


class ShiftedOperator(SymOperator):
    """``scale * A - shift * I`` without forming a matrix."""

    def __init__(self, op, shift=0.0, scale=1.0):
        self.base = op
        self.shift = float(shift)
        self.scale = float(scale)
        super().__init__(lambda v: self.scale * op.apply(v) - self.shift * v, op.dim)


def identity(dim):
    return SymOperator(lambda v: v.copy(), dim)


def as_operator(obj):
    """Wrap an array (2-D dense or 1-D diagonal) or pass an operator through."""
    if isinstance(obj, SymOperator):
        return obj
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 1:
        return DiagonalOperator(arr)
    return DenseOperator(arr)


def as_vector(u, dim=None):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise DomainError("expected a nonempty 1-D vector")
    if dim is not None and u.size != dim:
        raise DomainError(f"dimension mismatch: operator {dim}, vector {u.size}")
    if not np.all(np.isfinite(u)):
        raise DomainError("vector has non-finite entries")
    return u


def check_symmetric(op, trials=3, rtol=1e-12, rng=None):
    """Spot-check ``<Av, w> == <v, Aw>`` on random vectors."""
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(trials):
        v = rng.standard_normal(op.dim)
        w = rng.standard_normal(op.dim)
        av, aw = op.apply(v), op.apply(w)
        gap = abs(av @ w - v @ aw)
        if gap > rtol * max(np.linalg.norm(av) * np.linalg.norm(w), np.finfo(float).tiny):
            return False
    return True


def check_positive_definite(op, trials=3, rng=None):
    """Spot-check ``v^T B v > 0`` on random vectors (probabilistic, not a proof)."""
    rng = np.random.default_rng(1) if rng is None else rng
    for _ in range(trials):
        v = rng.standard_normal(op.dim)
        if not v @ op.apply(v) > 0:
            return False
    return True
