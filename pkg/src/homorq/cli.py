"""Command-line front end.

Subcommands::

    homorq quotients MATRIX VECTOR [--B FILE] [--tau T] [--strict]
    homorq sensitivity --family uniform --sigma 0.5 1 --mode scatter10 --out DIR
    homorq bench --dims 100 --rules HBB AHBB --out results.csv
    homorq solve --problem "Ext Beale" --n 100 --rule HBB --trace trace.csv

Exit codes: 0 success, 2 input error, 3 I/O error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import benchmark, gep, rqcore, sensitivity
from .operators import DenseOperator, DiagonalOperator, DomainError
from .problems import canonical_name, get_problem
from .projective import is_infinite
from .solver import Rule, SolverConfig, minimize

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class InputError(Exception):
    pass


def read_matrix(path):
    """Read ``rows cols`` followed by the entries, or ``diag n`` followed by ``n`` values.

    Returns a :class:`DenseOperator`/:class:`DiagonalOperator` for square input and
    a plain array otherwise.
    """
    try:
        tokens = Path(path).read_text().split()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if len(tokens) < 2:
        raise InputError(f"{path}: missing header")
    try:
        if tokens[0].lower() == "diag":
            n = int(tokens[1])
            values = np.array([float(t) for t in tokens[2:]])
            if n < 1 or values.size != n:
                raise InputError(f"{path}: expected {n} diagonal values, found {values.size}")
            return DiagonalOperator(values)
        rows, cols = int(tokens[0]), int(tokens[1])
        values = np.array([float(t) for t in tokens[2:]])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if rows < 1 or cols < 1 or values.size != rows * cols:
        raise InputError(f"{path}: expected {rows}x{cols} entries, found {values.size}")
    if not np.all(np.isfinite(values)):
        raise InputError(f"{path}: non-finite entries")
    mat = values.reshape(rows, cols)
    if rows == cols and rows > 1:
        return DenseOperator(mat)
    return mat


def read_vector(path):
    data = read_matrix(path)
    if isinstance(data, DiagonalOperator):
        raise InputError(f"{path}: expected a vector, got a diagonal matrix")
    arr = data.matrix if isinstance(data, DenseOperator) else data
    if 1 not in arr.shape:
        raise InputError(f"{path}: expected a {arr.shape[0]}x1 or 1x{arr.shape[1]} vector")
    return arr.ravel()


def _fmt(x):
    if x is None:
        return "undefined"
    if is_infinite(x):
        return "inf"
    return repr(float(x))


def cmd_quotients(args, out):
    A = read_matrix(args.matrix)
    u = read_vector(args.vector)
    if isinstance(A, np.ndarray):
        if A.size != 1:
            raise InputError("operator must be square")
        A = DenseOperator(A.reshape(1, 1))
    if u.size != A.dim:
        raise InputError(f"dimension mismatch: operator is {A.dim}, vector has {u.size}")
    if not np.any(u):
        raise InputError("vector must be nonzero")
    fields = {}
    if args.B:
        B = read_matrix(args.B)
        if isinstance(B, np.ndarray):
            raise InputError("B must be square")
        try:
            P = gep.OperatorPencil.create(A, B)
        except DomainError as exc:
            raise InputError(str(exc)) from exc
        pair, mu = gep.gen_homogeneous_pair(P, u)
        theta = gep.gen_rayleigh(P, u)
        fields.update(theta=theta, theta_harmonic=gep.gen_harmonic(P, u), alpha=gep.gen_homogeneous_rq(P, u),
                      alpha1=pair.a1, alpha2=pair.a2, mu=mu)
        Au, Bu = A.apply(u), B.apply(u)
        fields["res_standard"] = float(np.linalg.norm(Au - theta * Bu))
        th = fields["theta_harmonic"]
        fields["res_harmonic"] = float(np.linalg.norm(Bu)) if is_infinite(th) else \
            float(np.linalg.norm(Au / th - Bu))
        fields["res_homogeneous"] = float(np.linalg.norm(pair.a1 * Bu - pair.a2 * Au))
        alpha = fields["alpha"]
        galerkin = None if is_infinite(alpha) or alpha == 0 else gep.gen_galerkin_defect(P, u, alpha)
    else:
        report = rqcore.quotient_report(A, u)
        fields.update(report.as_dict())
        alpha = report.alpha
        galerkin = None if is_infinite(alpha) or alpha == 0 else rqcore.galerkin_defect(A, u, alpha)
    if args.tau is not None:
        if args.B:
            raise InputError("--tau is only supported without --B")
        fields["theta_harmonic_tau"] = rqcore.harmonic_rayleigh_target(A, u, args.tau)
    fields["galerkin_defect"] = galerkin

    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(fields.keys())
        w.writerow([_fmt(v) for v in fields.values()])
    else:
        width = max(len(k) for k in fields)
        for k, v in fields.items():
            out.write(f"{k:<{width}}  {_fmt(v)}\n")

    undefined = any(v is None or is_infinite(v) for k, v in fields.items()
                    if k in ("theta_harmonic", "alpha", "theta_harmonic_tau"))
    return EXIT_NUMERIC if args.strict and undefined else EXIT_OK


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HOMORQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"HOMORQ_SEED must be an integer, got {env!r}") from exc


def _write(path, text):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def cmd_sensitivity(args, out):
    seed = _seed(args)
    out_dir = Path(args.out)
    written = []
    for sigma in args.sigma:
        try:
            cfg = sensitivity.ExperimentConfig(args.family, sigma, args.n, args.eps, args.mode, seed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        rows = sensitivity.run_sensitivity_experiment(cfg)
        path = out_dir / f"sensitivity_{args.family}_sigma{sigma:g}_{args.mode}.csv"
        _write(path, sensitivity.rows_to_csv(rows))
        written.append(path)
        out.write(f"{path}\trows={len(rows)}\tcoverage={sensitivity.coverage(rows):.4f}\n")
    meta = {"schema_version": "1", "seed": seed, "family": args.family, "sigmas": args.sigma,
            "n": args.n, "eps": args.eps, "mode": args.mode,
            "files": [p.name for p in written], "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}
    _write(out_dir / f"sensitivity_{args.family}_{args.mode}.meta.json", json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def _config(args):
    return SolverConfig(line_search_enabled=not args.no_line_search)


def cmd_bench(args, out):
    try:
        problems = [canonical_name(p) for p in args.problems] if args.problems else None
        rules = [Rule.parse(r) for r in args.rules] if args.rules else None
        report = benchmark.run_bench(problems, args.dims, rules, _config(args), jobs=args.jobs)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from exc
    report.metadata.update(seed=_seed(args), timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"))
    md = report.to_markdown()
    if args.out:
        path = Path(args.out)
        _write(path, report.to_csv())
        _write(path.with_suffix(".md"), md)
        _write(path.with_suffix(".meta.json"), json.dumps(report.metadata, indent=2) + "\n")
    out.write(md)
    failed = [r for r in report.rows if not r.converged]
    for r in failed:
        out.write(f"not converged: {r.problem} n={r.n} {r.rule}: {r.message}\n")
    return EXIT_OK


def cmd_solve(args, out):
    try:
        problem = get_problem(args.problem, args.n)
        cfg = _config(args).with_rule(args.rule)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from exc
    rec = minimize(problem, cfg, trace=bool(args.trace))
    if args.trace:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "f", "gnorm", "beta", "nu", "backtracks"])
        for s in rec.stepsize_trace:
            w.writerow([s.k, repr(s.f), repr(s.gnorm), repr(s.beta), repr(s.nu), s.backtracks])
        _write(Path(args.trace), buf.getvalue())
    out.write(f"problem={problem.name} n={problem.dim} rule={cfg.rule.value} converged={rec.converged} "
              f"iterations={rec.iterations} nfe={rec.nfe} nge={rec.nge} "
              f"f={rec.f_final!r} gnorm={rec.final_gnorm!r}\n")
    if rec.message:
        out.write(rec.message + "\n")
    return EXIT_OK if rec.converged else EXIT_NUMERIC


def build_parser():
    parser = argparse.ArgumentParser(prog="homorq", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quotients", help="evaluate all quotients for a matrix and a vector")
    q.add_argument("matrix")
    q.add_argument("vector")
    q.add_argument("--B", help="second pencil matrix (symmetric positive definite)")
    q.add_argument("--tau", type=float, help="target for the shifted harmonic quotient")
    q.add_argument("--strict", action="store_true", help="exit 4 if a quotient is undefined or infinite")
    q.add_argument("--format", choices=("text", "csv"), default="text")
    q.set_defaults(func=cmd_quotients)

    s = sub.add_parser("sensitivity", help="run the eigenvector perturbation experiment")
    s.add_argument("--family", choices=("uniform", "gaussian"), default="uniform")
    s.add_argument("--sigma", type=float, nargs="+", default=[1.0])
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--mode", choices=("max100", "scatter10"), default="scatter10")
    s.add_argument("--seed", type=int, help="master seed (default: $HOMORQ_SEED or 0)")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_sensitivity)

    for name, func, helptext in (("bench", cmd_bench, "run the benchmark cells"),
                                 ("solve", cmd_solve, "solve one test problem")):
        b = sub.add_parser(name, help=helptext)
        b.add_argument("--no-line-search", action="store_true")
        b.add_argument("--seed", type=int, help="recorded in metadata; the solver is deterministic")
        b.set_defaults(func=func)
        if name == "bench":
            b.add_argument("--problems", nargs="+")
            b.add_argument("--dims", type=int, nargs="+")
            b.add_argument("--rules", nargs="+")
            b.add_argument("--jobs", type=int, default=1)
            b.add_argument("--out", help="CSV path; a .md table and .meta.json are written alongside")
        else:
            b.add_argument("--problem", required=True)
            b.add_argument("--n", type=int, default=100)
            b.add_argument("--rule", default="HBB")
            b.add_argument("--trace", help="write the per-iteration trace as CSV")
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"homorq: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IOError as exc:
        print(f"homorq: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ArithmeticError) as exc:
        print(f"homorq: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
