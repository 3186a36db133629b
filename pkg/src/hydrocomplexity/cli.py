"""Command-line front end.

Data goes to stdout (or --out), diagnostics to stderr. Exit codes: 0 success,
1 invalid input or configuration, 2 quadrature failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import IO, Any

import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import Settings, configure_logging
from .errors import ConvergenceError, HydroError, StateError
from .services.complexity import (
    AsymptoticRequest,
    ComplexityService,
    Limit,
    LimitRow,
    MeasureReport,
    Method,
    Quantity,
    Space,
)
from .services.functionals import K1Exponent
from .services.specfun import QuadratureConfig
from .services.states import (
    StateSpec,
    circular_state,
    derive,
    mean_radius,
    radial_momentum_density,
    radial_position_density,
)
from .services.validation import run_validation

logger = logging.getLogger(__name__)


CSV_COLUMNS = (
    "D",
    "Z",
    "n",
    "mu",
    "space",
    "method",
    "disequilibrium",
    "entropy_radial",
    "entropy_angular",
    "entropy_total",
    "complexity",
    "error_estimate",
    "converged",
)
PROFILE_COLUMNS = ("D", "Z", "n", "mu", "space", "x", "density")
LIMIT_COLUMNS = ("limit", "quantity", "n", "D", "log_exact", "log_asymptote", "log_ratio", "ratio")


METHODS = {
    "auto": Method.AUTO,
    "closed": Method.CLOSED_FORM,
    "functional": Method.FUNCTIONAL,
    "oracle": Method.DIRECT_ORACLE,
}

# Figure presets: (dimensions, principal numbers, spaces).
FIGURES: dict[str, tuple[list[int], list[int], list[Space]]] = {
    "dimension": (list(range(2, 11)), [1, 2, 3], [Space.POSITION, Space.MOMENTUM]),
    "entropy": (list(range(2, 21)), [1], [Space.POSITION, Space.MOMENTUM]),
    "rydberg": ([2, 5, 15], list(range(1, 16)), [Space.POSITION]),
}


def _int_list(text: str) -> list[int]:
    """Parse "2:10" (inclusive) or "2,3,5" into a list of ints."""
    try:
        if ":" in text:
            start, stop = (int(v) for v in text.split(":", 1))
            return list(range(start, stop + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected 'a:b' or 'a,b,c', got {text!r}") from e


def _mu_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from e


def _spaces(choice: str) -> list[Space]:
    return [Space.POSITION, Space.MOMENTUM] if choice == "both" else [Space(choice)]


def _state_from_args(args: argparse.Namespace) -> StateSpec:
    if args.mu is not None:
        mu = args.mu
    elif args.l is not None:
        tail = args.l if args.state == "circular" else 0
        mu = (args.l,) + (tail,) * (args.D - 2)
    else:
        raise StateError("one of --mu or --l is required")
    return StateSpec(D=args.D, Z=args.Z, n=args.n, mu=mu)


def _format_value(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    if isinstance(value, tuple):
        return ";".join(str(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _report_row(report: MeasureReport, digits: int) -> list[str]:
    return [_format_value(getattr(report, column), digits) for column in CSV_COLUMNS]


def _failed_row(spec: StateSpec, space: Space, method: Method, digits: int) -> list[str]:
    row = [_format_value(v, digits) for v in (spec.D, spec.Z, spec.n, spec.mu, space, method)]
    return row + ["nan"] * 6 + ["false"]


def _write_csv(out: IO[str], header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _print_text(out: IO[str], report: MeasureReport) -> None:
    print(f"{StateSpec(D=report.D, Z=report.Z, n=report.n, mu=report.mu).label()}", file=out)
    print(f"  space           {report.space.value} ({report.method.value})", file=out)
    print(f"  disequilibrium  {report.disequilibrium:.12g}", file=out)
    print(f"  entropy radial  {report.entropy_radial:.12g}", file=out)
    print(f"  entropy angular {report.entropy_angular:.12g}", file=out)
    print(f"  entropy total   {report.entropy_total:.12g}", file=out)
    print(f"  complexity      {report.complexity:.12g} +/- {report.error_estimate:.2g}", file=out)


def _service(args: argparse.Namespace, settings: Settings) -> ComplexityService:
    exponent = K1Exponent.PRINTED if getattr(args, "k1_printed", False) else K1Exponent.DERIVED
    return ComplexityService.from_settings(settings, exponent)


def cmd_compute(args: argparse.Namespace, settings: Settings) -> int:
    """Measure one state in one or both spaces."""
    spec = _state_from_args(args)
    service = _service(args, settings)
    reports = [service.measure(spec, space, METHODS[args.method]) for space in _spaces(args.space)]
    out = sys.stdout
    if args.format == "json":
        json.dump([r.model_dump(mode="json") for r in reports], out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        _write_csv(out, CSV_COLUMNS, (_report_row(r, args.digits) for r in reports))
    else:
        for report in reports:
            _print_text(out, report)
    return 0 if all(r.converged for r in reports) else 2


def _sweep_row(task: tuple[int, int, float, Space, Method, QuadratureConfig, int]) -> list[str]:
    n, D, Z, space, method, quadrature, digits = task
    spec = circular_state(n, D, Z)
    try:
        report = ComplexityService(quadrature).measure(spec, space, method)
    except HydroError as e:
        logger.error("%s %s failed: %s", spec.label(), space.value, e)
        return _failed_row(spec, space, method, digits)
    return _report_row(report, digits)


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """Circular states over a grid of D and n, one CSV row per (D, n, space) in grid order."""
    if args.figure:
        dims, ns, spaces = FIGURES[args.figure]
    elif args.dims is None and args.ns is None:
        raise StateError("sweep needs --dims/--ns or a --figure preset")
    else:
        dims, ns, spaces = [2], [1], _spaces(args.space)
    dims = args.dims or dims
    ns = args.ns or ns
    method = METHODS[args.method]
    quadrature = settings.quadrature()
    tasks = [
        (n, D, args.Z, space, method, quadrature, args.digits)
        for D in dims
        for n in ns
        for space in spaces
    ]
    workers = args.workers or settings.workers
    logger.info("sweeping %d grid points on %d worker(s)", len(tasks), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(task) for task in tasks]

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            _write_csv(f, CSV_COLUMNS, rows)
    else:
        _write_csv(sys.stdout, CSV_COLUMNS, rows)
    failed = sum(row[-1] == "false" for row in rows)
    if failed:
        logger.warning("%d of %d sweep rows did not converge", failed, len(rows))
        return 2
    return 0


def _limit_cells(row: LimitRow, digits: int) -> list[str]:
    return [_format_value(getattr(row, c), digits) if getattr(row, c) is not None else "" for c in LIMIT_COLUMNS]


def cmd_limits(args: argparse.Namespace, settings: Settings) -> int:
    """Exact against asymptotic log complexity of circular states along one limit."""
    service = _service(args, settings)
    limit = Limit(args.limit)
    quantity = Quantity(args.quantity)
    rows = []
    for point in args.points:
        if limit is Limit.DIMENSIONAL:
            req = AsymptoticRequest(limit=limit, quantity=quantity, n=args.fixed, D=point)
        else:
            req = AsymptoticRequest(limit=limit, quantity=quantity, n=point, D=args.fixed)
        rows.append(service.limit_row(req))
    if args.format == "json":
        json.dump([r.model_dump(mode="json") for r in rows], sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.format == "csv":
        _write_csv(sys.stdout, LIMIT_COLUMNS, (_limit_cells(r, args.digits) for r in rows))
    else:
        for r in rows:
            ratio = "overflow" if r.ratio is None else f"{r.ratio:.8f}"
            print(
                f"n={r.n:<5d} D={r.D:<5d} ln exact={r.log_exact:<16.10g} "
                f"ln asymptote={r.log_asymptote:<16.10g} ratio={ratio} log ratio={r.log_ratio:.8f}"
            )
    return 0


def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    """Run the invariant suite; exit 3 if any check fails."""
    report = run_validation(_service(args, settings), quick=args.quick)
    if args.format == "json":
        print(report.model_dump_json(indent=2))
    else:
        for check in report.checks:
            print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
        print("all checks passed" if report.passed else "some checks FAILED")
    return 0 if report.passed else 3


def cmd_profile(args: argparse.Namespace, settings: Settings) -> int:
    """Radial probability density r^(D-1) R^2 (or p^(D-1) M^2) on a uniform grid."""
    spec = _state_from_args(args)
    space = Space(args.space)
    if space is Space.POSITION:
        upper = args.max or 3.0 * mean_radius(spec)
        grid = np.linspace(0.0, upper, args.points)
        density = radial_position_density(spec, grid)
    else:
        upper = args.max or 6.0 * spec.Z / derive(spec).eta
        grid = np.linspace(0.0, upper, args.points)
        density = radial_momentum_density(spec, grid)
    mu = ";".join(map(str, spec.mu))
    rows = (
        [str(spec.D), f"{spec.Z:g}", str(spec.n), mu, space.value, f"{x:.{args.digits}g}", f"{y:.{args.digits}g}"]
        for x, y in zip(grid, density, strict=True)
    )
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            _write_csv(f, PROFILE_COLUMNS, rows)
    else:
        _write_csv(sys.stdout, PROFILE_COLUMNS, rows)
    return 0


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--D", type=int, required=True, help="Dimension D >= 2")
    parser.add_argument("--Z", type=float, default=1.0, help="Nuclear charge (default 1)")
    parser.add_argument("--n", type=int, required=True, help="Principal quantum number")
    parser.add_argument("--mu", type=_mu_list, help="Hyperquantum numbers l,mu_2,...,m")
    parser.add_argument("--l", type=int, help="Orbital number; the rest follow --state")
    parser.add_argument(
        "--state",
        choices=["s", "circular"],
        default="s",
        help="With --l: remaining numbers 0 (s) or all equal to l (circular)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrocomplexity",
        description="Shannon entropy, disequilibrium and shape complexity of D-dimensional hydrogenic states",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="Override LOG_LEVEL (debug, info, warning, error)")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="Measure a single state")
    _add_state_arguments(compute)
    compute.add_argument("--space", choices=["position", "momentum", "both"], default="both")
    compute.add_argument("--method", choices=list(METHODS), default="auto")
    compute.add_argument("--format", choices=["json", "csv", "text"], default="text")
    compute.add_argument("--digits", type=int, default=17, help="Significant digits in CSV")
    compute.add_argument("--k1-printed", action="store_true", help="Use the x^(-D-5) K1 integrand")
    compute.set_defaults(handler=cmd_compute)

    sweep = sub.add_parser("sweep", help="Circular states over a grid of D and n (CSV)")
    sweep.add_argument("--dims", type=_int_list, default=None, help="D values, 'a:b' or 'a,b,c'")
    sweep.add_argument("--ns", type=_int_list, default=None, help="n values, 'a:b' or 'a,b,c'")
    sweep.add_argument("--Z", type=float, default=1.0)
    sweep.add_argument("--space", choices=["position", "momentum", "both"], default="both")
    sweep.add_argument("--method", choices=list(METHODS), default="auto")
    sweep.add_argument("--figure", choices=sorted(FIGURES), help="Grid preset for a figure")
    sweep.add_argument("--out", help="Write CSV here instead of stdout")
    sweep.add_argument("--workers", type=int, default=None, help="Process pool size (HYDRO_WORKERS)")
    sweep.add_argument("--digits", type=int, default=17)
    sweep.set_defaults(handler=cmd_sweep)

    limits = sub.add_parser("limits", help="Exact vs asymptotic complexity (log space)")
    limits.add_argument("--limit", choices=[v.value for v in Limit], required=True)
    limits.add_argument("--quantity", choices=[v.value for v in Quantity], default="pos_complexity")
    limits.add_argument(
        "--fixed", type=int, required=True, help="n for the dimensional limit, D for the Rydberg limit"
    )
    limits.add_argument("--points", type=_int_list, required=True, help="D (dimensional) or n (Rydberg) values")
    limits.add_argument("--format", choices=["json", "csv", "text"], default="text")
    limits.add_argument("--digits", type=int, default=17)
    limits.set_defaults(handler=cmd_limits)

    validate = sub.add_parser("validate", help="Run the invariant suite")
    validate.add_argument("--quick", action="store_true", help="D <= 4, n <= 2 subgrid")
    validate.add_argument("--k1-printed", action="store_true", help="Inject the x^(-D-5) K1 integrand")
    validate.add_argument("--format", choices=["json", "text"], default="text")
    validate.set_defaults(handler=cmd_validate)

    profile = sub.add_parser("profile", help="Radial probability density on a grid (CSV)")
    _add_state_arguments(profile)
    profile.add_argument("--space", choices=["position", "momentum"], default="position")
    profile.add_argument("--points", type=int, default=201)
    profile.add_argument("--max", type=float, default=None, help="Upper end of the r (or p) grid")
    profile.add_argument("--out", help="Write CSV here instead of stdout")
    profile.add_argument("--digits", type=int, default=17)
    profile.set_defaults(handler=cmd_profile)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings.from_env()
        configure_logging(args.log_level or settings.log_level)
        return int(args.handler(args, settings))
    except ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (HydroError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        logger.debug("unexpected ValueError", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

