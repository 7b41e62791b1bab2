"""Weaving (uniform and linear weights) and neural complexity versus p for the
white-noise GHZ family, one CSV per system size.

    python scripts/mixing_curves.py --outdir results/curves
"""

import argparse
from pathlib import Path

import numpy as np

from weaveq.cli import main as cli_main
from weaveq.ghz_analytic import ghz_sweep, linear_grid

SIZES = (3, 5, 10, 50, 100, 1000, 10_000, 20_000)


def summarize(n, grid):
    rows = ghz_sweep(n, grid)
    for name in ("uniform", "linear"):
        v = np.array([r.weavings[name] for r in rows])
        i = int(np.argmax(v))
        print(f"N={n:6d}  W_{name:8s} max {v[i]:.6g} at p={grid[i]:.3f}  (p=0: {v[0]:.6g})")
    c = np.array([r.neural_complexity for r in rows])
    i = int(np.argmax(c))
    print(f"N={n:6d}  C          max {c[i]:.6g} at p={grid[i]:.3f}  (p=0: {c[0]:.6g})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results/curves")
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for n in SIZES:
        path = out / f"ghz_curve_N{n}.csv"
        cli_main(["ghz-curve", "--n", str(n), "--p-grid", f"0:1:{args.points}", "--out", str(path)])
        summarize(n, linear_grid(0, 1, args.points))
