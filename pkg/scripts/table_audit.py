#!/usr/bin/env python3
"""Table audit: rerun the reference iteration tables and report deviations."""
import argparse
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.config import ExperimentSpec
from app.engine import ExperimentRunner
from core.utils.constants import DEFAULT_NS, LARGE_N, REFERENCE_ITERATIONS, reference_iterations

REPORT_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "table_report.json")


def band(reference: int) -> float:
    """Accepted absolute deviation from a reference count."""
    return max(10.0, 0.05 * reference)


def audit_table(k_over_pi: float, include_large: bool = False, jobs: int = 1, seed: int = 0):
    spec = ExperimentSpec(
        alphas=tuple(REFERENCE_ITERATIONS[k_over_pi]),
        Ns=DEFAULT_NS,
        k_over_pi=k_over_pi,
        include_large=include_large,
        jobs=jobs,
        seed=seed,
    )
    cells = []
    for row in ExperimentRunner(spec).run_table().rows:
        reference = reference_iterations(k_over_pi, row.alpha, row.N)
        cells.append({
            "alpha": row.alpha,
            "N": row.N,
            "iterations": row.iterations,
            "reference": reference,
            "predicted": row.predicted_iterations,
            "rho_formula": row.rho_formula,
            "measured_rate": row.measured_rate,
            "converged": row.converged,
            "within_band": reference is not None and abs(row.iterations - reference) <= band(reference),
        })
    return cells


def print_table(k_over_pi, cells):
    print(f"\n{'=' * 80}")
    print(f"k = {k_over_pi:g} pi")
    print(f"{'=' * 80}")
    print(f"{'alpha':>8} {'N':>5} {'iters':>7} {'ref':>6} {'dev%':>7} {'pred':>6} {'rho':>9} {'tail':>9}  ok")
    print(f"{'─' * 80}")
    for cell in cells:
        reference = cell["reference"]
        dev = 100.0 * (cell["iterations"] - reference) / reference if reference else float("nan")
        predicted = cell["predicted"] if cell["predicted"] is not None else "-"
        print(f"{cell['alpha']:>8g} {cell['N']:>5d} {cell['iterations']:>7d} {reference or '-':>6} "
              f"{dev:>+7.1f} {predicted:>6} {cell['rho_formula']:>9.6f} {cell['measured_rate']:>9.6f}  "
              f"{'yes' if cell['within_band'] else 'NO'}")


def main():
    parser = argparse.ArgumentParser(description="Compare SOR iteration counts with the reference tables.")
    parser.add_argument("--include-large", action="store_true", help=f"Also run N = {LARGE_N}")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--report", default=REPORT_PATH, help="JSON report path")
    args = parser.parse_args()

    report = {}
    for k_over_pi in sorted(REFERENCE_ITERATIONS, reverse=True):
        cells = audit_table(k_over_pi, args.include_large, args.jobs, args.seed)
        print_table(k_over_pi, cells)
        report[f"{k_over_pi:g}"] = cells

    misses = sum(not cell["within_band"] for cells in report.values() for cell in cells)
    total = sum(len(cells) for cells in report.values())
    print(f"\n{total - misses}/{total} cells within max(10, 5%) of the reference counts")

    with open(args.report, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2)
    print(f"Detailed report written to: {args.report}")
    return 1 if misses else 0


if __name__ == "__main__":
    sys.exit(main())
