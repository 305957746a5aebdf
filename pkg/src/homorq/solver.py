"""Gradient method with a nonmonotone (max-of-last-M) backtracking line search.

The stepsize rule is pluggable (BB1, BB2, HBB, ABB, AHBB). The initial trial
step of every line search is the rule's stepsize, safeguarded to
``[beta_min, beta_max]``; uphill pairs (``s.y < 0``) fall back to
``max(min(1/||g||, 1e5), 1)``.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from . import stepsize as st

MAX_BACKTRACKS = 60
UPHILL_CAP = 1e5


class Rule(str, enum.Enum):
    BB1 = "BB1"
    BB2 = "BB2"
    HBB = "HBB"
    ABB = "ABB"
    AHBB = "AHBB"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).upper())


TABLE_RULES = (Rule.BB1, Rule.BB2, Rule.ABB, Rule.HBB, Rule.AHBB)


@dataclass(frozen=True)
class SolverConfig:
    beta0: float = 1.0
    beta_min: float = 1e-30
    beta_max: float = 1e30
    c_ls: float = 1e-4
    sigma_ls: float = 0.5
    memory_M: int = 10
    tol: float = 1e-6
    max_iter: int = 50_000
    rule: Rule = Rule.HBB
    eta: float = 0.8
    m: int = 5
    line_search_enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule.parse(self.rule))
        if not (self.beta0 > 0 and 0 < self.beta_min < self.beta_max):
            raise ValueError("need beta0 > 0 and beta_max > beta_min > 0")
        if not (0 < self.c_ls < 1 and 0 < self.sigma_ls < 1):
            raise ValueError("line search parameters must lie in (0, 1)")
        if self.memory_M < 1 or self.max_iter < 1 or not self.tol > 0:
            raise ValueError("memory_M, max_iter and tol must be positive")
        if not 0 < self.eta < 1 or self.m < 0:
            raise ValueError("need eta in (0, 1) and m >= 0")

    def with_rule(self, rule):
        return replace(self, rule=Rule.parse(rule))

    def snapshot(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["rule"] = self.rule.value
        return d


@dataclass(frozen=True)
class StepRecord:
    """One iteration: trial step ``beta``, accepted step ``nu`` and the next step."""

    k: int
    beta: float
    nu: float
    backtracks: int
    f: float
    gnorm: float
    sy: float = math.nan
    bb1: float | None = None
    bb2: float | None = None
    hbb: float | None = None
    uphill: bool = False
    beta_next: float = math.nan


@dataclass
class RunRecord:
    iterations: int
    nfe: int
    nge: int
    final_gnorm: float
    f_final: float
    converged: bool
    x: np.ndarray
    g0norm: float
    message: str = ""
    stepsize_trace: list[StepRecord] | None = field(default=None, repr=False)


class _Counted:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.fn(x)


def _next_step(rule, state, ss, sy, yy):
    b1 = st.bb1_from_products(ss, sy, yy)
    b2 = st.bb2_from_products(ss, sy, yy)
    bh = st.hbb_from_products(ss, sy, yy)
    if rule is Rule.BB1:
        beta = b1
    elif rule is Rule.BB2:
        beta = b2
    elif rule is Rule.HBB:
        beta = bh
    else:
        if b1 is None or b2 is None or bh is None:
            beta = None
        else:
            state.push(b2, bh)
            beta = st.abb(state, b1, b2) if rule is Rule.ABB else st.ahbb(state, b1, b2, bh)
    return beta, b1, b2, bh


def minimize(problem, config=None, trace=False):
    """Minimize ``problem`` from its start point; returns a :class:`RunRecord`."""
    cfg = SolverConfig() if config is None else config
    fun = _Counted(problem.objective)
    grad = _Counted(problem.gradient)
    state = st.AdaptiveState(cfg.eta, cfg.m)
    steps = [] if trace else None

    def record(iterations, x, fx, gnorm, converged, message=""):
        return RunRecord(iterations, fun.calls, grad.calls, gnorm, fx, converged, x, g0norm, message, steps)

    x = np.array(problem.start, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        fx = fun(x)
        g = grad(x)
    g0norm = float(np.linalg.norm(g))
    if not (math.isfinite(fx) and math.isfinite(g0norm)):
        return record(0, x, fx, g0norm, False, "non-finite objective or gradient at start point")
    if g0norm == 0.0:
        return record(0, x, fx, 0.0, True)
    target = cfg.tol * g0norm
    fhist = deque([fx], maxlen=cfg.memory_M)
    beta = cfg.beta0
    gnorm = g0norm

    for k in range(cfg.max_iter):
        nu = beta
        gg = gnorm * gnorm
        backtracks = 0
        with np.errstate(over="ignore", invalid="ignore"):
            if cfg.line_search_enabled:
                fref = max(fhist)
                while True:
                    x_new = x - nu * g
                    f_new = fun(x_new)
                    # a non-finite trial value fails the test and is backtracked
                    if f_new <= fref - cfg.c_ls * nu * gg:
                        break
                    if backtracks == MAX_BACKTRACKS:
                        return record(k, x, fx, gnorm, False,
                                      f"line search failed after {MAX_BACKTRACKS} backtracks at k={k}")
                    nu *= cfg.sigma_ls
                    backtracks += 1
            else:
                x_new = x - nu * g
                f_new = fun(x_new)
            g_new = grad(x_new)
        gnorm_new = float(np.linalg.norm(g_new))
        if not (math.isfinite(f_new) and math.isfinite(gnorm_new)):
            return record(k, x, fx, gnorm, False, f"non-finite objective or gradient at k={k + 1}")

        s = x_new - x
        y = g_new - g
        x, fx, g, gnorm = x_new, f_new, g_new, gnorm_new
        fhist.append(fx)

        if gnorm <= target:
            if trace:
                steps.append(StepRecord(k, beta, nu, backtracks, fx, gnorm))
            return record(k + 1, x, fx, gnorm, True)

        ss, sy, yy = float(s @ s), float(s @ y), float(y @ y)
        raw, b1, b2, bh = _next_step(cfg.rule, state, ss, sy, yy)
        uphill = sy < 0 or raw is None
        if uphill:
            raw = max(min(1.0 / gnorm, UPHILL_CAP), 1.0)
        beta_next = min(max(raw, cfg.beta_min), cfg.beta_max)
        if trace:
            steps.append(StepRecord(k, beta, nu, backtracks, fx, gnorm, sy, b1, b2, bh, uphill, beta_next))
        beta = beta_next

    return record(cfg.max_iter, x, fx, gnorm, False, "maximum number of iterations reached")


def nfe_accounting(trace):
    """Objective evaluations implied by a trace: ``f(x0)`` plus one per trial step."""
    return 1 + sum(1 + rec.backtracks for rec in trace)
