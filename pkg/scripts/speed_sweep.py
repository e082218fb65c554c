"""Wall-time sweeps over sample count, dimension and k on two-Gaussian mixtures.

Writes one JSON report per axis and prints doubling ratios for the n axis.
"""

import argparse
import json
from pathlib import Path

from gitcluster.bench import run_bench

GRIDS = {
    "n": [25_000, 50_000, 100_000, 200_000],
    "dim": [10, 100, 1000],
    "k": [10, 25, 50, 100],
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--axes", default="n,dim,k")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--out-dir", default="bench_out")
    args = p.parse_args()
    out = Path(args.out_dir)
    out.mkdir(exist_ok=True)
    for axis in args.axes.split(","):
        rows = run_bench(axis, GRIDS[axis], repeat=args.repeat)
        (out / f"{axis}.json").write_text(json.dumps(rows, indent=1))
        for row in rows:
            print(f"{axis}: n={row['n']} dims={row['dims']} k={row['k']} {row['seconds']:.2f}s")
        if axis == "n":
            secs = [r["seconds"] for r in rows]
            print("doubling ratios:", ", ".join(f"{b / a:.2f}" for a, b in zip(secs, secs[1:])))


if __name__ == "__main__":
    main()
