#!/usr/bin/env python3
"""Run every bundled figure preset and write one CSV per sweep.

Default output directory is results/ next to the repository root; pass
--presets to restrict the run, e.g.  `run_figures.py --presets fig4 fig6`.
"""
import argparse
import pathlib
import sys
import time

from jamgame import PRESET_NAMES, emit_csv, figure_preset, run_sweep


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", help="directory for the CSV files")
    ap.add_argument("--presets", nargs="+", default=list(PRESET_NAMES),
                    choices=PRESET_NAMES, metavar="NAME",
                    help=f"subset of {', '.join(PRESET_NAMES)}")
    ap.add_argument("--oracle-only", action="store_true",
                    help="skip the closed form, solve every game by value iteration")
    args = ap.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for name in args.presets:
        scenario = figure_preset(name)
        t0 = time.perf_counter()
        table = run_sweep(scenario, oracle_only=args.oracle_only)
        dt = time.perf_counter() - t0
        path = outdir / f"{name}.csv"
        emit_csv(table, path)
        errors = sum(1 for row in table.rows
                     if "error" in table.columns
                     and row[table.columns.index("error")] not in (None, ""))
        print(f"{name}: {len(table.rows)} rows -> {path}  "
              f"({dt:.2f}s, {errors} error cells)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
