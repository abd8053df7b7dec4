#!/usr/bin/env python3
"""
Script to report on a benchmark run: bound checks per cell, monotonicity of
the noiseless curves and a PFW vs PGD comparison per noise level.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import pandas as pd

from bench import CurvePoint, check_monotone, read_csv, summarize


def compare_algorithms(summary: pd.DataFrame) -> list[dict[str, Any]]:
    """For every (sigma, T) with both algorithms present, which one ended lower."""
    rows = []
    quantity = "mean_error" if summary["mean_error"].notna().all() else "mean_f_xbar"
    for (sigma, T), cell in summary.groupby(["sigma", "T"], sort=True):
        by_alg = dict(zip(cell["algorithm"], cell[quantity]))
        if "pfw" in by_alg and "pgd" in by_alg:
            rows.append({"sigma": float(sigma), "T": int(T), "quantity": quantity,
                         "pfw": float(by_alg["pfw"]), "pgd": float(by_alg["pgd"]),
                         "lower": "pfw" if by_alg["pfw"] < by_alg["pgd"] else "pgd"})
    return rows


def analyze(points: Sequence[CurvePoint]) -> tuple[dict[str, Any], pd.DataFrame]:
    summary = summarize(points)
    checked = summary[summary["within_bound"].notna()]
    failures = checked[~checked["within_bound"].astype(bool)]
    return {
        "points": len(points),
        "cells": len(summary),
        "cells_checked": len(checked),
        "cells_over_bound": [{"experiment": row.experiment, "algorithm": row.algorithm,
                              "sigma": float(row.sigma), "T": int(row.T)}
                             for row in failures.itertuples(index=False)],
        "monotonicity_warnings": check_monotone(points),
        "comparison": compare_algorithms(summary),
    }, summary


def display_report(report: dict[str, Any], summary: pd.DataFrame) -> None:
    print("\n" + "=" * 60)
    print("📊 BENCHMARK REPORT")
    print("=" * 60)

    print(f"\n🎯 Overall:")
    print(f"   • Points: {report['points']}")
    print(f"   • Cells: {report['cells']} ({report['cells_checked']} with a known optimum)")
    if report["cells_over_bound"]:
        print(f"   • ❌ Cells over bound + 3 stderr: {len(report['cells_over_bound'])}")
        for cell in report["cells_over_bound"]:
            print(f"     - {cell['experiment']}/{cell['algorithm']} sigma={cell['sigma']:g} T={cell['T']}")
    else:
        print(f"   • ✅ Every checked cell is within its bound")

    print(f"\n📈 Per-cell means:")
    print("   algorithm  sigma        T     mean error      bound")
    print("   ---------  -----  -------  -------------  ---------")
    for row in summary.itertuples(index=False):
        value = row.mean_error if pd.notna(row.mean_error) else row.mean_f_xbar
        print(f"   {row.algorithm:9s}  {row.sigma:5g}  {row.T:7d}  {value:13.6g}  {row.bound:9.4g}")

    if report["monotonicity_warnings"]:
        print(f"\n⚠️  Monotonicity:")
        for message in report["monotonicity_warnings"]:
            print(f"   • {message}")

    if report["comparison"]:
        print(f"\n🔍 PFW vs PGD:")
        for row in report["comparison"]:
            print(f"   • sigma={row['sigma']:g} T={row['T']}: {row['lower']} lower "
                  f"(pfw {row['pfw']:.4g}, pgd {row['pgd']:.4g})")


def save_report(report: dict[str, Any], path: Path) -> None:
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"\n💾 Report saved to '{path}'")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Summarize a benchmark points CSV")
    parser.add_argument("csv", help="points.csv written by bench.py run")
    parser.add_argument("--output", help="where to write analysis.json (default: next to the CSV)")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        points = read_csv(args.csv)
    except (OSError, ValueError) as exc:
        print(f"❌ Could not read {args.csv}: {exc}", file=sys.stderr)
        return 2
    if not points:
        print("❌ No points in the CSV")
        return 2

    report, summary = analyze(points)
    display_report(report, summary)
    save_report(report, Path(args.output) if args.output else Path(args.csv).with_name("analysis.json"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
