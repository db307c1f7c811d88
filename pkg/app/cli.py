#!/usr/bin/env python3
"""
Complex SOR Toolkit - CLI
Iteration tables, convergence curves, bound grids and property verification
for SOR with the optimal complex relaxation parameter.
"""
import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from app.config import ConfigError, ExperimentSpec, load_spec, merge_overrides
from core.utils.constants import DEFAULT_SEED, DEFAULT_TOL, reference_iterations
from core.utils.encoding import ComplexEncoder
from core.utils.errors import SorError
from core.utils.logger import set_level
from core.utils.version import __version__

EXIT_OK = 0
EXIT_FAILURE = 1

DEFAULT_VERIFY_SAMPLES = 100000

# Absolute slack on the per-row bracket check lower <= 1 - rho <= upper.
ROW_BRACKET_SLACK = 1e-12


def _real(text):
    """Float or exact fraction such as ``1/16``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _add_experiment_flags(sub, repeatable=True):
    if repeatable:
        sub.add_argument("--alpha", type=_real, action="append", metavar="A",
                         help="Damping parameter (repeatable, fractions allowed: 1/16)")
        sub.add_argument("--n", type=int, action="append", metavar="N",
                         help="Interior grid points per direction (repeatable)")
    else:
        sub.add_argument("--alpha", type=_real, required=True, metavar="A", help="Damping parameter")
        sub.add_argument("--n", type=int, required=True, metavar="N", help="Interior grid points per direction")
    sub.add_argument("--k-over-pi", type=_real, metavar="K", help="Wave number in units of pi (default 16)")
    sub.add_argument("--tol", type=float, help=f"Relative residual tolerance (default {DEFAULT_TOL:g})")
    sub.add_argument("--max-iter", type=int, help="Sweep limit per solve (default 50000)")
    sub.add_argument("--seed", type=int, help=f"Right-hand side seed (default {DEFAULT_SEED})")
    sub.add_argument("--out", metavar="FILE", help="Write CSV here instead of stdout")
    sub.add_argument("--config", metavar="FILE", help="JSON file mirroring ExperimentSpec; flags override it")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="complex-sor",
        description="🧮 Complex SOR Toolkit - optimal complex relaxation for 2-cyclic systems",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  complex-sor run-table --out table1.csv                    # k = 16 pi, default alphas and Ns
  complex-sor run-table --k-over-pi 8 --alpha 1/16 --n 160  # one cell of the k = 8 pi table
  complex-sor run-table --include-large --jobs 4 --xlsx t.xlsx
  complex-sor run-curve --alpha 1/2 --n 80 --out curve.csv  # residual history
  complex-sor bounds-grid --re-range 0 2 --im-range -1 1 --resolution 201
  complex-sor verify --samples 100000 --seed 7 --json report.json
  complex-sor inspect --mu 0.99+0.01j
        """
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose debug output")
    parser.add_argument("-q", "--quiet", action="store_true", help="No screen summaries (files only)")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    table = commands.add_parser("run-table", help="Iteration counts for every (alpha, N) cell")
    _add_experiment_flags(table)
    table.add_argument("--include-large", action="store_true", default=None, help="Also run N = 640")
    table.add_argument("--jobs", type=int, help="Cells solved concurrently (default 1)")
    table.add_argument("--xlsx", metavar="FILE", help="Also write the table as an Excel workbook")

    curve = commands.add_parser("run-curve", help="Residual after every sweep for one cell")
    _add_experiment_flags(curve, repeatable=False)

    grid = commands.add_parser("bounds-grid", help="Sample |f|, the f/g ratio and the lemma bounds")
    grid.add_argument("--re-range", type=_real, nargs=2, default=[0.0, 2.0], metavar=("LO", "HI"))
    grid.add_argument("--im-range", type=_real, nargs=2, default=[-1.0, 1.0], metavar=("LO", "HI"))
    grid.add_argument("--resolution", type=int, default=101, help="Points per axis (default 101)")
    grid.add_argument("--tight", action="store_true", help="Use the tighter beta interval")
    grid.add_argument("--out", metavar="FILE", help="Write CSV here instead of stdout")

    verify = commands.add_parser("verify", help="Randomized property suites")
    verify.add_argument("--samples", type=int, default=DEFAULT_VERIFY_SAMPLES,
                        help=f"Random samples per sampled property (default {DEFAULT_VERIFY_SAMPLES})")
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--suite", action="append", metavar="NAME",
                        help="Run only this suite (repeatable)")
    verify.add_argument("--json", metavar="FILE", help="Also write the report as JSON")

    inspect = commands.add_parser("inspect", help="Bound report for a segment endpoint or a model")
    inspect.add_argument("--mu", type=_complex, help="Segment endpoint, e.g. 0.99+0.01j")
    inspect.add_argument("--n", type=int, metavar="N")
    inspect.add_argument("--k-over-pi", type=_real, metavar="K", default=16.0)
    inspect.add_argument("--alpha", type=_real, metavar="A")
    inspect.add_argument("--tol", type=float, default=DEFAULT_TOL)
    inspect.add_argument("--tight", action="store_true", help="Use the tighter beta interval")

    return parser


def resolve_spec(args):
    """Defaults, then the optional JSON config, then command-line flags."""
    spec = load_spec(args.config) if getattr(args, "config", None) else ExperimentSpec()
    alphas = args.alpha if isinstance(args.alpha, list) or args.alpha is None else [args.alpha]
    ns = args.n if isinstance(args.n, list) or args.n is None else [args.n]
    return merge_overrides(
        spec,
        alphas=tuple(alphas) if alphas else None,
        Ns=tuple(ns) if ns else None,
        k_over_pi=args.k_over_pi,
        tol=args.tol,
        max_iter=args.max_iter,
        seed=args.seed,
        output=args.out,
        include_large=getattr(args, "include_large", None),
        jobs=getattr(args, "jobs", None),
    )


def _emit_csv(sheet, path):
    from app.export import ExportManager

    if path:
        ExportManager.export_to_csv(sheet, path)
    else:
        sys.stdout.write(ExportManager.render_csv(sheet))


def cmd_run_table(args, spec):
    from app.engine import ExperimentRunner
    from app.export import ExportManager, table_sheet

    result = ExperimentRunner(spec).run_table()
    sheet = table_sheet(result)
    _emit_csv(sheet, spec.output)
    if args.xlsx:
        ExportManager.export_to_excel(sheet, args.xlsx)

    if spec.output and not args.quiet:
        print_summary(result)
    for row in result.rows:
        if not row.converged:
            print(f"⚠️ alpha={row.alpha:g}, N={row.N}: no convergence within "
                  f"{spec.max_iter} sweeps", file=sys.stderr)
    violations = [row for row in result.rows if not row.brackets_rate(ROW_BRACKET_SLACK)]
    for row in violations:
        print(f"❌ alpha={row.alpha:g}, N={row.N}: 1 - rho = {1 - row.rho_formula:.6g} outside "
              f"[{row.lower_gap:.6g}, {row.upper_gap:.6g}]", file=sys.stderr)
    return EXIT_FAILURE if violations else EXIT_OK


def cmd_run_curve(args, spec):
    from app.engine import ExperimentRunner
    from app.export import curve_sheet

    curve = ExperimentRunner(spec).run_curve(spec.alphas[0], spec.Ns[0])
    _emit_csv(curve_sheet(curve, spec.tol), spec.output)
    if spec.output and not args.quiet:
        status = "converged" if curve.log.converged else "NOT converged"
        print(f"📉 {curve.log.iterations} sweeps, {status}, final residual "
              f"{curve.log.final_residual:.3e}, tail contraction "
              f"{curve.log.tail_contraction():.6f} (rho = {curve.report.rho:.6f})")
    return EXIT_OK


def cmd_bounds_grid(args):
    from app.engine import bounds_grid
    from app.export import grid_sheet

    samples = bounds_grid(args.re_range, args.im_range, args.resolution, tight=args.tight)
    _emit_csv(grid_sheet(samples, args.re_range, args.im_range, args.resolution, args.tight),
              args.out)
    return EXIT_OK


def cmd_verify(args):
    from app.verify import run_verification

    report = run_verification(args.samples, args.seed, args.suite)
    if not args.quiet:
        print(report.render())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2, cls=ComplexEncoder)
    if not report.passed:
        print("❌ Verification failed", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_inspect(args):
    from app.engine import inspect_helmholtz, inspect_mu
    from core.helmholtz.model import HelmholtzParams

    if args.mu is not None:
        data = inspect_mu(args.mu, tol=args.tol, tight=args.tight)
    else:
        params = HelmholtzParams.from_k_over_pi(args.n, args.k_over_pi, args.alpha)
        data = inspect_helmholtz(params, args.tol, tight=args.tight)
    print(json.dumps(data, indent=2, cls=ComplexEncoder))
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    set_level(logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING)

    if args.command == "inspect" and args.mu is None and (args.n is None or args.alpha is None):
        parser.error("inspect needs --mu, or --n and --alpha")
    if args.command == "verify" and args.samples < 1:
        parser.error("--samples must be >= 1")
    if args.command == "bounds-grid" and args.resolution < 1:
        parser.error("--resolution must be >= 1")
    if args.command == "verify" and args.suite:
        from app.verify import SUITES

        unknown = sorted(set(args.suite) - set(SUITES))
        if unknown:
            parser.error(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")

    spec = None
    if args.command in ("run-table", "run-curve"):
        try:
            spec = resolve_spec(args)
        except ConfigError as exc:
            parser.error(str(exc))

    try:
        if args.command == "run-table":
            return cmd_run_table(args, spec)
        if args.command == "run-curve":
            return cmd_run_curve(args, spec)
        if args.command == "bounds-grid":
            return cmd_bounds_grid(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_inspect(args)
    except (SorError, ValueError, OSError) as exc:
        print(f"❌ {args.command} failed: {exc}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILURE


def print_summary(result):
    """Prints measured iteration counts next to the reference ones."""
    spec = result.spec
    print("=" * 72)
    print(f"🧮 SOR ITERATION TABLE - k = {spec.k_over_pi:g} pi, tol = {spec.tol:g}")
    print("=" * 72)
    print(f"{'alpha':>8} {'N':>5} {'iters':>7} {'ref':>6} {'dev%':>7} {'rho':>9} {'measured':>9}")
    for row in result.rows:
        reference = reference_iterations(spec.k_over_pi, row.alpha, row.N)
        ref_text = f"{reference:>6d}" if reference else f"{'-':>6}"
        dev_text = (f"{100.0 * (row.iterations - reference) / reference:>+7.1f}"
                    if reference else f"{'-':>7}")
        mark = "" if row.converged else "  ⚠️"
        print(f"{row.alpha:>8g} {row.N:>5d} {row.iterations:>7d} {ref_text} {dev_text} "
              f"{row.rho_formula:>9.6f} {row.measured_rate:>9.6f}{mark}")
    if result.warnings:
        print(f"\n⚠️ {len(result.warnings)} phase warning(s):")
        for warning in result.warnings:
            print(f"   alpha={warning['alpha']:g}, N={warning['N']}: "
                  f"{warning['phase']}: {warning['message']}")
    if spec.output:
        print(f"\n📁 Table: {spec.output} ({format_size(os.path.getsize(spec.output))})")
    print("=" * 72)


def format_size(bytes_val):
    for unit in ['B', 'KB', 'MB']:
        if bytes_val < 1024:
            return f"{bytes_val:.1f} {unit}"
        bytes_val /= 1024
    return f"{bytes_val:.1f} GB"


if __name__ == "__main__":
    sys.exit(main())
