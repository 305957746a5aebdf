"""Sensitivity of the Rayleigh quotients to perturbations of an exact eigenvector.

With ``u = x + eps * e`` (``x`` a unit eigenvector for ``lambda``, ``e`` a unit
vector orthogonal to ``x``) each quotient behaves like
``lambda + eps^2 * e.p(A)e + O(eps^4)`` for a kind-specific quadratic ``p``,
which gives the relative-error bounds computed by :func:`asymptotic_bounds`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .operators import DomainError, as_operator, as_vector
from .rng import standard_normals, uniforms

MAX_RETRIES = 8
GAP_THRESHOLD = 1e-12
CSV_COLUMNS = ("family", "sigma", "n", "eps", "eig_index", "lambda", "kind", "pert_id",
               "value", "rel_error", "lower_bound", "upper_bound")


@dataclass(frozen=True)
class QuotientKind:
    name: str
    tau: float | None = None

    def __post_init__(self):
        if self.name not in ("standard", "harmonic", "harmonic_target", "homogeneous"):
            raise ValueError(f"unknown quotient kind {self.name!r}")
        if self.name == "harmonic_target" and (self.tau is None or not math.isfinite(self.tau)):
            raise ValueError("harmonic_target needs a finite tau")

    @property
    def label(self):
        return self.name if self.tau is None else f"{self.name}({self.tau!r})"


STANDARD = QuotientKind("standard")
HARMONIC = QuotientKind("harmonic")
HOMOGENEOUS = QuotientKind("homogeneous")
EXPERIMENT_KINDS = (STANDARD, HARMONIC, HOMOGENEOUS)


def harmonic_target(tau):
    return QuotientKind("harmonic_target", float(tau))


@dataclass(frozen=True)
class SpectrumModel:
    """Diagonal operator given by strictly increasing eigenvalues."""

    eigenvalues: tuple
    target_index: int = 0

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1 or ev.size < 1:
            raise DomainError("need at least one eigenvalue")
        if np.any(np.diff(ev) <= 0):
            raise DomainError("eigenvalues must be strictly increasing")
        if not 0 <= self.target_index < ev.size:
            raise DomainError("target index out of range")
        object.__setattr__(self, "eigenvalues", tuple(ev.tolist()))

    @property
    def target(self):
        return self.eigenvalues[self.target_index]

    def others(self):
        ev = np.asarray(self.eigenvalues)
        return np.delete(ev, self.target_index)

    def with_target(self, index):
        return SpectrumModel(self.eigenvalues, index)


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float

    def contains(self, value, slack_low=1.0, slack_high=1.0):
        return self.lower * slack_low <= value <= self.upper * slack_high


def make_orthogonal_perturbation(x, seed):
    """Unit vector orthogonal to the unit vector ``x``, from a keyed normal draw.

    ``seed`` is an int or a tuple of ints; a numerically zero projection is
    retried with the next seed up to ``MAX_RETRIES`` times.
    """
    x = as_vector(x)
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise DomainError("x must have unit norm")
    key = (seed,) if isinstance(seed, (int, np.integer)) else tuple(seed)
    for attempt in range(MAX_RETRIES + 1):
        k = key[:-1] + (key[-1] + attempt,)
        e = standard_normals(k, x.size)
        e = e - (e @ x) * x
        e = e - (e @ x) * x
        norm = np.linalg.norm(e)
        if norm > 1e-8:
            return e / norm
    raise DomainError("could not draw a perturbation orthogonal to x")


def p_lambda(kind, lam, t):
    """Quadratic whose values on the spectrum drive the relative-error bounds."""
    if kind.name == "standard":
        return t - lam
    if lam == 0:
        raise DomainError("lambda must be nonzero for this quotient kind")
    if kind.name == "harmonic":
        return t * (t - lam) / lam
    if kind.name == "homogeneous":
        return (t - lam) * (lam * t + 1.0) / (lam * lam + 1.0)
    tau = kind.tau
    if lam == tau:
        raise DomainError("target coincides with the eigenvalue")
    return (t - tau) * (t - lam) / (lam - tau)


def asymptotic_bounds(kind, spectrum, eps):
    """Relative-error bounds ``eps^2/|lambda| * [min, max] |p(lambda_i)|`` over the other eigenvalues."""
    lam = spectrum.target
    if lam == 0:
        raise DomainError("relative bounds need a nonzero eigenvalue")
    if not eps > 0:
        raise DomainError("eps must be positive")
    others = spectrum.others()
    if others.size == 0:
        raise DomainError("spectrum needs at least two eigenvalues")
    vals = np.abs(p_lambda(kind, lam, others))
    scale = eps * eps / abs(lam)
    return BoundPair(float(scale * vals.min()), float(scale * vals.max()))


def vertex_candidates(kind, spectrum):
    """Points where ``|p_lambda|`` can peak on ``[lambda_1, lambda_n]``."""
    lam = spectrum.target
    ev = spectrum.eigenvalues
    pts = [ev[0], ev[-1]]
    if kind.name == "harmonic":
        vertex = lam / 2.0
    elif kind.name == "homogeneous":
        vertex = 0.5 * (lam - 1.0 / lam)
    elif kind.name == "harmonic_target":
        vertex = 0.5 * (lam + kind.tau)
    else:
        vertex = None
    if vertex is not None and ev[0] <= vertex <= ev[-1]:
        pts.append(vertex)
    return pts


def second_order_prediction(kind, A, lam, e, eps):
    """Quotient value at ``x + eps e`` up to ``O(eps^4)``."""
    A = as_operator(A)
    e = as_vector(e, A.dim)
    Ae = A.apply(e)
    e2 = eps * eps
    if kind.name == "standard":
        return lam + e2 * float(e @ (Ae - lam * e))
    if lam == 0:
        raise DomainError("lambda must be nonzero for this quotient kind")
    if kind.name == "harmonic":
        return lam + e2 * float(Ae @ (Ae - lam * e)) / lam
    if kind.name == "homogeneous":
        return lam + e2 * lam / (lam * lam + 1.0) * float((Ae + e / lam) @ (Ae - lam * e))
    tau = kind.tau
    return lam + e2 * float((Ae - tau * e) @ (Ae - lam * e)) / (lam - tau)


def quotient_values(kind, A, U):
    """Quotient of ``kind`` for each row of ``U`` (vectorized over rows)."""
    A = as_operator(A)
    U = np.atleast_2d(np.asarray(U, dtype=float))
    AU = np.array([A.apply(u) for u in U])
    p = np.einsum("ij,ij->i", U, U)
    q = np.einsum("ij,ij->i", U, AU)
    r = np.einsum("ij,ij->i", AU, AU)
    return _values_from_moments(kind, p, q, r)


def _values_from_moments(kind, p, q, r):
    if kind.name == "standard":
        return q / p
    if kind.name == "harmonic":
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(q != 0.0, r / np.where(q != 0.0, q, 1.0), np.inf)
    if kind.name == "harmonic_target":
        tau = kind.tau
        return (r - tau * q) / (q - tau * p)
    d = p - r
    root = np.hypot(d, 2.0 * q)
    with np.errstate(divide="ignore", invalid="ignore"):
        sel = np.where(d <= 0.0, (root - d) / (2.0 * q), 2.0 * q / (root + d))
    # u.Au == 0: zero when Au.Au <= u.u, otherwise the point at infinity
    return np.where(q != 0.0, sel, np.where(r <= p, 0.0, np.inf))


# --- experiment protocol ----------------------------------------------------

_FAMILIES = {"uniform": 1, "gaussian": 2}
_MODES = {"max100": 100, "scatter10": 10}


def _sigma_code(sigma):
    return int(round(sigma * 1_000_000))


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "uniform"
    sigma: float = 1.0
    n: int = 100
    eps: float = 1e-3
    mode: str = "scatter10"
    seed: int = 0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {sorted(_FAMILIES)}")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {sorted(_MODES)}")
        if not (self.sigma > 0 and self.eps > 0 and self.n >= 2 and self.seed >= 0):
            raise ValueError("need sigma > 0, eps > 0, n >= 2 and seed >= 0")

    @property
    def perturbations(self):
        return _MODES[self.mode]

    def key(self, *ids):
        return (self.seed, _FAMILIES[self.family], _sigma_code(self.sigma), *ids)


def draw_spectrum(cfg):
    """Sorted eigenvalues: U(0, 2 sigma) or N(0, sigma^2); redrawn on near-ties or zeros."""
    for attempt in range(MAX_RETRIES + 1):
        key = cfg.key(0, attempt)
        if cfg.family == "uniform":
            ev = 2.0 * cfg.sigma * (1.0 - uniforms(key, cfg.n))
        else:
            ev = cfg.sigma * standard_normals(key, cfg.n)
        ev = np.sort(ev)
        if np.min(np.diff(ev)) >= GAP_THRESHOLD and np.all(ev != 0.0):
            return ev
    raise DomainError("could not draw a spectrum with simple nonzero eigenvalues")


@dataclass(frozen=True)
class SensitivityRow:
    family: str
    sigma: float
    n: int
    eps: float
    eig_index: int
    lam: float
    kind: str
    pert_id: int
    value: float
    rel_error: float
    lower_bound: float
    upper_bound: float

    def as_list(self):
        return [self.family, repr(self.sigma), self.n, repr(self.eps), self.eig_index, repr(self.lam),
                self.kind, self.pert_id, repr(self.value), repr(self.rel_error),
                repr(self.lower_bound), repr(self.upper_bound)]


def perturbed_vectors(cfg, eigenvalues, index):
    """Normalized ``x + eps e`` for every perturbation of eigenvector ``index``."""
    n = len(eigenvalues)
    x = np.zeros(n)
    x[index] = 1.0
    U = np.empty((cfg.perturbations, n))
    E = np.empty_like(U)
    for j in range(cfg.perturbations):
        e = make_orthogonal_perturbation(x, cfg.key(1, index, j * (MAX_RETRIES + 1)))
        u = x + cfg.eps * e
        E[j] = e
        U[j] = u / np.linalg.norm(u)
    return U, E


def run_sensitivity_experiment(cfg):
    """Relative errors and bounds for every eigenvalue and each of the three kinds.

    Rows are ordered by ``(eig_index, kind, pert_id)``. In ``max100`` mode
    one row per ``(eig_index, kind)`` carries the worst perturbation.
    """
    ev = draw_spectrum(cfg)
    rows = []
    for i, lam in enumerate(ev):
        U, _ = perturbed_vectors(cfg, ev, i)
        p = np.einsum("ij,ij->i", U, U)
        AU = U * ev
        q = np.einsum("ij,ij->i", U, AU)
        r = np.einsum("ij,ij->i", AU, AU)
        model = SpectrumModel(tuple(ev), i)
        for kind in EXPERIMENT_KINDS:
            vals = _values_from_moments(kind, p, q, r)
            rel = np.abs(vals - lam) / abs(lam)
            b = asymptotic_bounds(kind, model, cfg.eps)
            ids = [int(np.argmax(rel))] if cfg.mode == "max100" else range(len(vals))
            for j in ids:
                rows.append(SensitivityRow(cfg.family, float(cfg.sigma), cfg.n, float(cfg.eps), i + 1,
                                           float(lam), kind.name, int(j), float(vals[j]), float(rel[j]),
                                           b.lower, b.upper))
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(row.as_list())
    return buf.getvalue()


def coverage(rows, slack_low=0.9, slack_high=1.1):
    """Fraction of rows with ``lower*slack_low <= rel_error <= upper*slack_high``."""
    if not rows:
        return float("nan")
    hits = sum(r.lower_bound * slack_low <= r.rel_error <= r.upper_bound * slack_high for r in rows)
    return hits / len(rows)


def prediction_ratio(kind, eigenvalues, index, e, eps):
    """``|q(eps) - pred(eps)| / |q(eps/2) - pred(eps/2)|``; about 16 for O(eps^4) residuals."""
    A = np.asarray(eigenvalues, dtype=float)
    lam = float(A[index])
    x = np.zeros(A.size)
    x[index] = 1.0
    out = []
    for h in (eps, eps / 2.0):
        u = x + h * e
        value = float(quotient_values(kind, A, u[None, :])[0])
        out.append(abs(value - second_order_prediction(kind, A, lam, e, h)))
    return out[0] / out[1] if out[1] > 0 else math.inf


__all__ = [
    "BoundPair", "ExperimentConfig", "QuotientKind", "SensitivityRow", "SpectrumModel",
    "STANDARD", "HARMONIC", "HOMOGENEOUS", "EXPERIMENT_KINDS",
    "asymptotic_bounds", "coverage", "draw_spectrum", "harmonic_target",
    "make_orthogonal_perturbation", "p_lambda", "prediction_ratio", "quotient_values",
    "rows_to_csv", "run_sensitivity_experiment", "second_order_prediction", "vertex_candidates",
]
