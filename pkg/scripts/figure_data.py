#!/usr/bin/env python3
"""Emit plot-ready CSV grids for external figure tooling.

Writes, for each embedded dataset: the fitted PT-E pdf/cdf/hrf curve grid
(with histogram sidecar) and the scaled TTT transform.  A density-shape
sweep over a small grid of transmutation/tilt values is written alongside
for the family-overview figure.
"""

import argparse
import sys
from pathlib import Path

from ptgfit.cli import main as cli_main


def run(out_dir, seed):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for key in ("I", "II"):
        rc = cli_main(
            ["curves", "--model", "pte", "--data", f"embedded:{key}",
             "--seed", str(seed), "--format", "csv",
             "--out", str(out / f"pte_fit_{key}.csv")]
        )
        if rc:
            return rc
        rc = cli_main(
            ["ttt", "--data", f"embedded:{key}", "--format", "csv",
             "--out", str(out / f"ttt_{key}.csv")]
        )
        if rc:
            return rc
    shape_grid = [
        ("0.9,2.0,1.0", "pte"),
        ("-0.9,2.0,1.0", "pte"),
        ("0.5,-6.6,1.0", "pte"),
        ("0.5,6.6,1.0", "pte"),
        ("0.5,-2.0,1.0,2.0", "ptw"),
        ("-0.5,2.0,1.0,0.7", "ptw"),
    ]
    for params, model in shape_grid:
        slug = params.replace(",", "_").replace("-", "m").replace(".", "p")
        rc = cli_main(
            ["curves", "--model", model, f"--params={params}", "--format", "csv",
             "--out", str(out / f"shape_{model}_{slug}.csv")]
        )
        if rc:
            return rc
    print(f"wrote figure data to {out}/")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="figure_data")
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()
    sys.exit(run(ns.out_dir, ns.seed))
