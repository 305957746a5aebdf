"""Standard, harmonic and homogeneous Rayleigh quotients, and gradient methods
that use the inverse homogeneous quotient as a stepsize."""

from .operators import DenseOperator, DiagonalOperator, DomainError, SymOperator, as_operator
from .projective import INFINITY, HomogeneousPair, chordal_distance, is_infinite
from .rqcore import (
    QuotientReport,
    galerkin_defect,
    harmonic_rayleigh,
    harmonic_rayleigh_target,
    homogeneous_pair,
    homogeneous_residual,
    homogeneous_rq,
    quadratic_roots,
    quotient_report,
    rayleigh,
    residuals,
)
from .solver import Rule, RunRecord, SolverConfig, minimize

__version__ = "0.1.0"
