"""Benchmark harness over the published (problem, n) cells and the five rules."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .problems import canonical_name, get_problem
from .solver import TABLE_RULES, Rule, SolverConfig, minimize

SCHEMA_VERSION = "1"

# (problem, n) -> rule -> (NFE, iterations); rule order BB1, BB2, ABB, HBB, AHBB
_RAW = [
    ("Diagonal 1", 100, (65, 68, 65, 69, 67), (57, 63, 60, 63, 62)),
    ("Diagonal 1", 1000, (305, 194, 160, 159, 165), (222, 180, 149, 145, 156)),
    ("Diagonal 1", 10000, (761, 433, 302, 346, 310), (491, 409, 289, 323, 297)),
    ("Diagonal 2", 100, (75, 68, 59, 73, 66), (68, 67, 58, 68, 63)),
    ("Diagonal 2", 1000, (447, 234, 165, 281, 212), (286, 219, 157, 185, 175)),
    ("Diagonal 2", 10000, (689, 702, 322, 1221, 542), (405, 663, 307, 729, 407)),
    ("Diagonal 3", 100, (76, 83, 73, 67, 67), (62, 73, 65, 60, 59)),
    ("Diagonal 3", 1000, (311, 200, 152, 151, 148), (206, 184, 138, 137, 137)),
    ("Diagonal 3", 10000, (349, 375, 238, 283, 278), (224, 356, 224, 266, 263)),
    ("Extended Beale", 100, (50, 34, 33, 33, 33), (45, 30, 29, 27, 29)),
    ("Extended Powell", 100, (138, 80, 117, 136, 156), (103, 74, 116, 100, 131)),
    ("Extended Powell", 1000, (117, 97, 114, 132, 122), (97, 84, 113, 103, 104)),
    ("Extended Powell", 10000, (164, 125, 144, 161, 155), (127, 112, 143, 114, 124)),
    ("Extended Rosenbrock", 100, (104, 65, 88, 69, 87), (54, 53, 72, 55, 74)),
    ("Extended White and Holst", 100, (99, 48, 39, 37, 39), (62, 37, 29, 27, 29)),
    ("Full Hessian FH1", 100, (623, 304, 337, 256, 376), (408, 279, 310, 221, 347)),
    ("Full Hessian FH2", 100, (987, 574, 563, 447, 499), (635, 530, 537, 407, 470)),
    ("Generalized Rosenbrock", 100, (4121, 3162, 2996, 4808, 3567), (2623, 2932, 2736, 3085, 2840)),
    ("Generalized Rosenbrock", 1000, (37769, 27324, 28624, 37829, 31516), (24020, 24972, 26078, 24082, 24700)),
    ("Generalized White and Holst", 100, (11040, 8403, 8866, 11227, 7216), (6949, 8107, 8660, 7123, 5602)),
    ("Hager", 100, (24, 27, 27, 25, 27), (21, 24, 24, 22, 24)),
    ("Hager", 1000, (41, 46, 44, 44, 45), (37, 42, 40, 40, 41)),
    ("Hager", 10000, (84, 62, 64, 66, 64), (74, 55, 57, 59, 57)),
    ("Perturbed quadratic", 100, (76, 98, 72, 76, 73), (63, 90, 64, 66, 65)),
    ("Perturbed quadratic", 1000, (289, 220, 169, 263, 156), (194, 198, 158, 243, 145)),
    ("Perturbed quadratic", 10000, (618, 350, 316, 270, 260), (401, 330, 296, 252, 242)),
    ("Strictly Convex 2", 100, (82, 62, 61, 66, 71), (72, 58, 56, 57, 65)),
    ("Strictly Convex 2", 1000, (282, 156, 120, 156, 141), (197, 145, 111, 137, 132)),
    ("Strictly Convex 2", 10000, (467, 234, 191, 213, 199), (289, 221, 179, 195, 185)),
]

REFERENCE = {
    (name, n): {rule: (nfe[i], its[i]) for i, rule in enumerate(TABLE_RULES)}
    for name, n, nfe, its in _RAW
}


def reference_cells(problems=None, dims=None):
    """Published (problem, n) cells, optionally filtered."""
    wanted = None if not problems else {canonical_name(p) for p in problems}
    cells = []
    for name, n in REFERENCE:
        if wanted is not None and name not in wanted:
            continue
        if dims and n not in dims:
            continue
        cells.append((name, n))
    return cells


@dataclass(frozen=True)
class BenchRow:
    problem: str
    n: int
    rule: str
    nfe: int
    iterations: int
    converged: bool
    f_final: float
    gnorm_final: float
    ref_nfe: int | None = None
    ref_iterations: int | None = None
    message: str = ""


@dataclass
class BenchReport:
    rows: list[BenchRow]
    metadata: dict = field(default_factory=dict)
    finals: dict = field(default_factory=dict, repr=False)

    COLUMNS = ("problem", "n", "rule", "nfe", "iterations", "converged", "f_final",
               "gnorm_final", "ref_nfe", "ref_iterations")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([r.problem, r.n, r.rule, r.nfe, r.iterations, int(r.converged),
                        repr(r.f_final), repr(r.gnorm_final),
                        "" if r.ref_nfe is None else r.ref_nfe,
                        "" if r.ref_iterations is None else r.ref_iterations])
        return buf.getvalue()

    def to_markdown(self):
        """NFE and iteration tables, bolding per-row minima (ties all bold)."""
        rules = list(dict.fromkeys(r.rule for r in self.rows))
        cells = {}
        for r in self.rows:
            cells.setdefault((r.problem, r.n), {})[r.rule] = r

        def fmt(values):
            best = min(v for v in values if v is not None) if any(v is not None for v in values) else None
            out = []
            for v in values:
                if v is None:
                    out.append("-")
                elif v == best:
                    out.append(f"**{v}**")
                else:
                    out.append(str(v))
            return out

        header = "| Problem | n | " + " | ".join(f"NFE {x}" for x in rules) + " | " + \
            " | ".join(f"It {x}" for x in rules) + " |"
        lines = [header, "|" + "---|" * (2 + 2 * len(rules))]
        for (name, n), by_rule in cells.items():
            nfe = [by_rule[x].nfe if x in by_rule and by_rule[x].converged else None for x in rules]
            its = [by_rule[x].iterations if x in by_rule and by_rule[x].converged else None for x in rules]
            lines.append(f"| {name} | {n} | " + " | ".join(fmt(nfe)) + " | " + " | ".join(fmt(its)) + " |")
        return "\n".join(lines) + "\n"


def run_cell(name, n, rule, config=None):
    """Solve one (problem, n, rule) cell; returns ``(BenchRow, final iterate)``."""
    cfg = (config or SolverConfig()).with_rule(rule)
    ref = REFERENCE.get((name, n), {}).get(Rule.parse(rule))
    try:
        rec = minimize(get_problem(name, n), cfg)
    except Exception as exc:  # a failing cell must not stop the run
        return BenchRow(name, n, cfg.rule.value, 0, 0, False, float("nan"), float("nan"),
                        *(ref or (None, None)), message=f"{type(exc).__name__}: {exc}"), None
    row = BenchRow(name, n, cfg.rule.value, rec.nfe, rec.iterations, rec.converged, rec.f_final,
                   rec.final_gnorm, *(ref or (None, None)), message=rec.message)
    return row, rec.x


def _run_cell_args(args):
    return run_cell(*args)


def run_bench(problems=None, dims=None, rules=None, config=None, jobs=1):
    """Run every selected published cell with every selected rule."""
    rules = [Rule.parse(r) for r in rules] if rules else list(TABLE_RULES)
    cells = reference_cells(problems, dims)
    if not cells:
        raise ValueError("filters select no benchmark cells")
    tasks = [(name, n, rule, config) for name, n in cells for rule in rules]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell_args, tasks))
    else:
        results = [_run_cell_args(t) for t in tasks]
    rows = [row for row, _ in results]
    finals = {(row.problem, row.n, row.rule): x for row, x in results}
    meta = {
        "schema_version": SCHEMA_VERSION,
        "config": (config or SolverConfig()).snapshot(),
        "rules": [r.value for r in rules],
        "cells": [list(c) for c in cells],
    }
    return BenchReport(rows, meta, finals)


def max_pairwise_distance(points):
    pts = [np.asarray(p) for p in points if p is not None]
    worst = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            worst = max(worst, float(np.linalg.norm(pts[i] - pts[j])))
    return worst
