"""Command line front end.

Subcommands mirror the library layers: spec validation and harmonic
analysis, analytic and numeric Stokes coefficients, plateau detection,
Melnikov evaluation, the leading splitting formula, the Arnold-forcing
pipeline, and the reference-table regression rerun.

Exit statuses: 0 ok, 1 usage, 2 validation, 3 numerical failure,
4 regression mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .harmonics import (
    DEFAULT_LADDER_BOUND,
    SpecError,
    degeneracy_order,
    sumset_ladder,
)
from .inner_solver import (
    SolverConfig,
    SolverError,
    _chi_task,
    chi_estimate,
    parallel_map,
    plateau_scan,
)
from .io import (
    ParseError,
    RunManifest,
    arnold_report_dict,
    emit_spec,
    format_table1,
    load_spec,
    plateau_report_dict,
    run_table1,
    solver_parameters,
    write_json_report,
    write_manifest,
    write_melnikov_csv,
    write_scan_csv,
)
from .melnikov import QuadratureBudgetExceeded, melnikov_closed, melnikov_quadrature
from .splitting import (
    OrderMismatch,
    arnold_pipeline,
    dominance_check,
    splitting_leading,
)
from .stokes_analytic import chi1, chi2

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_REGRESSION = 4

ORACLE_REL_TOL = 1e-8


class _UsageError(Exception):
    pass


class _StageError(Exception):
    """Numerical failure tagged with the pipeline stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract here reserves 2 for
    # validation errors, so route usage problems through an exception
    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise _UsageError(f"grid must be lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise _UsageError(f"grid must ascend with positive step, got {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(lo + i * step for i in range(count))


def _add_solver_flags(sub):
    sub.add_argument("--re-z0", type=float, default=40.0, help="seed abscissa R (default 40)")
    sub.add_argument("--series-order", type=int, default=20, help="seed series order N (default 20)")
    sub.add_argument("--rel-tol", type=float, default=1e-12, help="ODE relative tolerance")
    sub.add_argument("--abs-tol", type=float, default=1e-13, help="ODE absolute tolerance")
    sub.add_argument(
        "--fixed-step",
        type=float,
        default=None,
        help="use the fixed-step integrator with this step (bit-deterministic)",
    )


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        series_order_N=args.series_order,
        re_z0=args.re_z0,
        ode_rel_tol=args.rel_tol,
        ode_abs_tol=args.abs_tol,
        fixed_step=args.fixed_step,
    )


def _spec_order(args, spec):
    n = degeneracy_order(spec).order_n
    if getattr(args, "order", None) is not None and args.order != n:
        raise SpecError(
            f"--order {args.order} does not match the forcing's degeneracy order {n}"
        )
    return n


def _chi_for(spec, n, cfg, rho_grid):
    """Closed form when available, plateau scan otherwise."""
    if n == 1:
        return chi1(spec).value, "analytic"
    if n == 2:
        return chi2(spec).value, "analytic"
    est = plateau_scan(spec, n, rho_grid, cfg)
    return est.plateau_value, "numeric-plateau"


def _emit(args, manifest: RunManifest, writer, stdout_text: str) -> None:
    if args.out:
        writer(args.out)
        write_manifest(args.out, manifest)
    else:
        print(stdout_text)


def _cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    print(json.dumps(emit_spec(spec), indent=2))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    report = degeneracy_order(spec)
    ladder = sumset_ladder(spec, report.order_n)
    print(f"support: {list(spec.support)}")
    for ell, g in enumerate(ladder, start=1):
        print(f"G_{ell}: {sorted(g)}")
    print(f"n(g) = {report.order_n}")
    print(f"witness: 1 = {' + '.join(f'({m})' for m in report.witness)}")
    return EXIT_OK


def _cmd_chi_analytic(args) -> int:
    spec = load_spec(args.spec)
    n = degeneracy_order(spec).order_n if args.order is None else args.order
    if n not in (1, 2):
        raise SpecError(f"closed forms exist for orders 1 and 2 only, requested {n}")
    coeff = chi1(spec) if n == 1 else chi2(spec)
    print(f"order: {n}")
    print(f"chi_re: {coeff.value.real!r}")
    print(f"chi_im: {coeff.value.imag!r}")
    return EXIT_OK


def _cmd_chi_numeric(args) -> int:
    spec = load_spec(args.spec)
    n = _spec_order(args, spec)
    cfg = _solver_config(args)
    grid = _parse_grid(args.rho_grid)
    t0 = time.perf_counter()
    try:
        estimates = parallel_map(_chi_task, [(spec, n, rho, cfg) for rho in grid])
    except SolverError as exc:
        raise _StageError("branch integration", exc) from exc
    rows = list(zip(grid, estimates))
    manifest = RunManifest(
        subcommand="chi-numeric",
        parameters={
            "spec": str(args.spec),
            "order": n,
            "rho_grid": list(grid),
            **solver_parameters(cfg),
        },
        duration_s=time.perf_counter() - t0,
    )
    if args.format == "csv":
        lines = ["rho,re_chi,im_chi,abs_chi"] + [
            f"{rho:.17g},{chi.real:.17g},{chi.imag:.17g},{abs(chi):.17g}"
            for rho, chi in rows
        ]
        _emit(args, manifest, lambda p: write_scan_csv(p, rows), "\n".join(lines))
    else:
        payload = {
            "order": n,
            "rows": [
                {"rho": rho, "re_chi": chi.real, "im_chi": chi.imag, "abs_chi": abs(chi)}
                for rho, chi in rows
            ],
        }
        _emit(
            args,
            manifest,
            lambda p: write_json_report(p, payload),
            json.dumps(payload, indent=2),
        )
    return EXIT_OK


def _cmd_plateau(args) -> int:
    spec = load_spec(args.spec)
    n = _spec_order(args, spec)
    cfg = _solver_config(args)
    t0 = time.perf_counter()
    try:
        est = plateau_scan(spec, n, _parse_grid(args.rho_grid), cfg)
    except SolverError as exc:
        raise _StageError("plateau scan", exc) from exc
    payload = plateau_report_dict(est)
    manifest = RunManifest(
        subcommand="plateau",
        parameters={
            "spec": str(args.spec),
            "order": n,
            "rho_grid": list(est.rho_grid),
            **solver_parameters(cfg),
        },
        duration_s=time.perf_counter() - t0,
    )
    _emit(
        args,
        manifest,
        lambda p: write_json_report(p, payload),
        json.dumps(payload, indent=2),
    )
    return EXIT_OK


def _cmd_melnikov(args) -> int:
    spec = load_spec(args.spec)
    taus = _parse_grid(args.tau_grid)
    t0 = time.perf_counter()
    rows = []
    for tau in taus:
        ev = melnikov_closed(spec, args.epsilon, tau)
        if args.oracle:
            try:
                quad = melnikov_quadrature(spec, args.epsilon, tau)
            except (QuadratureBudgetExceeded, ValueError) as exc:
                raise _StageError("quadrature oracle", exc) from exc
            err = abs(ev.value - quad) / max(1.0, abs(ev.value))
            if err > ORACLE_REL_TOL:
                raise _StageError(
                    "oracle comparison",
                    QuadratureBudgetExceeded(
                        f"closed sum and quadrature differ by {err:.3e} at tau = {tau!r}"
                    ),
                )
        rows.append((tau, ev.value, ev.leading_term))
    manifest = RunManifest(
        subcommand="melnikov",
        parameters={
            "spec": str(args.spec),
            "epsilon": args.epsilon,
            "tau_grid": list(taus),
            "oracle": bool(args.oracle),
        },
        duration_s=time.perf_counter() - t0,
    )
    lines = ["tau,melnikov,leading_term"] + [
        f"{tau:.17g},{value:.17g},{leading:.17g}" for tau, value, leading in rows
    ]
    _emit(args, manifest, lambda p: write_melnikov_csv(p, rows), "\n".join(lines))
    return EXIT_OK


def _cmd_splitting(args) -> int:
    spec = load_spec(args.spec)
    n = degeneracy_order(spec).order_n
    cfg = _solver_config(args)
    try:
        chi, provenance = _chi_for(spec, n, cfg, _parse_grid(args.rho_grid))
    except SolverError as exc:
        raise _StageError("stokes coefficient", exc) from exc
    ev = splitting_leading(chi, n, args.mu, args.epsilon, args.u, args.tau)
    print(f"n = {n}  chi_re = {chi.real!r}  chi_im = {chi.imag!r}  ({provenance})")
    print(f"leading = {ev.leading!r}")
    for name, value in ev.error_budget.as_dict().items():
        print(f"budget {name} = {value!r}")
    print(f"dominance: {dominance_check(ev)}")
    return EXIT_OK


def _cmd_arnold(args) -> int:
    cfg = SolverConfig(series_order_N=args.series_order, re_z0=args.re_z0)
    try:
        report = arnold_pipeline(
            args.p, args.q, args.A, args.B, cfg, mu=args.mu, epsilon=args.epsilon
        )
    except OrderMismatch as exc:
        raise _StageError("order cross-check", exc) from exc
    except SolverError as exc:
        raise _StageError("plateau scan", exc) from exc
    payload = arnold_report_dict(report)
    manifest = RunManifest(
        subcommand="arnold",
        parameters={
            "p": args.p,
            "q": args.q,
            "A": args.A,
            "B": args.B,
            "mu": args.mu,
            "epsilon": args.epsilon,
        },
    )
    _emit(
        args,
        manifest,
        lambda p: write_json_report(p, payload),
        json.dumps(payload, indent=2),
    )
    return EXIT_OK


def _cmd_table1(args) -> int:
    try:
        result = run_table1()
    except SolverError as exc:
        raise _StageError("reference table recomputation", exc) from exc
    print(format_table1(result))
    if args.out:
        payload = {
            "rows": [
                {
                    "label": row.label,
                    "order": row.order,
                    "cells": [
                        {
                            "rho": c.rho,
                            "computed_re": c.computed.real,
                            "computed_im": c.computed.imag,
                            "reference": c.reference,
                            "rel_deviation": c.rel_deviation,
                            "gated": c.gated,
                        }
                        for c in row.cells
                    ],
                }
                for row in result.rows
            ],
            "passed": result.passed,
        }
        write_json_report(args.out, payload)
        write_manifest(
            args.out,
            RunManifest(
                subcommand="table1",
                parameters={},
                duration_s=result.duration_s,
            ),
        )
    if not result.passed:
        print("reference table mismatch in the gated range", file=sys.stderr)
        return EXIT_REGRESSION
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sepsplit", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="parse and validate a spec document")
    sub.add_argument("spec")
    sub.set_defaults(handler=_cmd_validate)

    sub = subs.add_parser("analyze", help="harmonic sumsets, degeneracy order, witness")
    sub.add_argument("spec")
    sub.set_defaults(handler=_cmd_analyze)

    sub = subs.add_parser("chi-analytic", help="closed-form chi for orders 1 and 2")
    sub.add_argument("spec")
    sub.add_argument("--order", type=int, choices=(1, 2), default=None)
    sub.set_defaults(handler=_cmd_chi_analytic)

    sub = subs.add_parser("chi-numeric", help="e^rho-amplified extraction over a rho grid")
    sub.add_argument("spec")
    sub.add_argument("--order", type=int, default=None)
    sub.add_argument("--rho-grid", default="4:10:1", help="lo:hi:step (default 4:10:1)")
    _add_solver_flags(sub)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.set_defaults(handler=_cmd_chi_numeric)

    sub = subs.add_parser("plateau", help="plateau detection over a rho grid")
    sub.add_argument("spec")
    sub.add_argument("--order", type=int, default=None)
    sub.add_argument("--rho-grid", default="4:10:1")
    _add_solver_flags(sub)
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_plateau)

    sub = subs.add_parser("melnikov", help="Melnikov function over a tau grid")
    sub.add_argument("spec")
    sub.add_argument("--epsilon", type=float, required=True)
    sub.add_argument("--tau-grid", default="0:6.283185307179586:0.7853981633974483")
    sub.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check the residue sum against direct quadrature",
    )
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_melnikov)

    sub = subs.add_parser("splitting", help="leading splitting term and error budget")
    sub.add_argument("spec")
    sub.add_argument("--mu", type=float, required=True)
    sub.add_argument("--epsilon", type=float, required=True)
    sub.add_argument("--u", type=float, default=0.0)
    sub.add_argument("--tau", type=float, default=0.0)
    sub.add_argument("--rho-grid", default="4:10:1")
    _add_solver_flags(sub)
    sub.set_defaults(handler=_cmd_splitting)

    sub = subs.add_parser("arnold", help="pipeline for A sin(p tau) + B cos(q tau)")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--A", type=float, required=True)
    sub.add_argument("--B", type=float, required=True)
    sub.add_argument("--mu", type=float, default=0.05)
    sub.add_argument("--epsilon", type=float, default=0.1)
    _add_solver_flags(sub)
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_arnold)

    sub = subs.add_parser("table1", help="recompute the shipped reference table")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _StageError as exc:
        print(f"numerical failure at {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ParseError, SpecError, FileNotFoundError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverError, QuadratureBudgetExceeded, OrderMismatch) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
