"""Command-line interface: cluster, eval, gen, graph and bench.

Exit status is 0 on success, 1 on a runtime failure and 2 on a usage error.
Human-readable messages go to standard error; CSV and JSON go to files or
standard output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .bench import SWEEPS, run_bench
from .datagen import SHAPES, SyntheticSpec, generate
from .dataset import DataError, load_csv, save_csv
from .edge_filter import PriorError, PriorProportion
from .metrics import evaluate
from .pipeline import GitConfig, StageError, run_git
from .topograph import WEIGHT_MODES, export_graph

RUNTIME_ERRORS = (DataError, StageError, PriorError, OSError, ValueError, MemoryError)


def _log(msg):
    print(msg, file=sys.stderr)


def _looks_like_header(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if row and any(c.strip() for c in row):
                try:
                    [float(c) for c in row]
                    return False
                except ValueError:
                    return True
    return False


def _load_points(args):
    header = args.header or _looks_like_header(args.input)
    label_column = args.label_column
    if label_column is None and header:
        with Path(args.input).open(newline="", encoding="utf-8") as fh:
            names = [c.strip() for c in next(csv.reader(fh))]
        if "label" in names:
            label_column = "label"
    ds, _ = load_csv(args.input, has_header=header, label_column=label_column)
    return ds


def _prior(args):
    if args.proportions is not None:
        return PriorProportion.parse(args.proportions)
    return PriorProportion.uniform(args.classes)


def _write_graph(graph, path):
    fmt = "dot" if Path(path).suffix.lower() in (".dot", ".gv") else "json"
    Path(path).write_text(export_graph(graph, fmt), encoding="utf-8")
    return fmt


def cmd_cluster(args):
    ds = _load_points(args)
    prior = _prior(args)
    res = run_git(ds, GitConfig(k=args.k, prior=prior, weight_mode=args.weight_mode))
    if args.out:
        with Path(args.out).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "label"])
            w.writerows(enumerate(res.labels.tolist()))
    if args.graph:
        _write_graph(res.topograph, args.graph)
    q = ", ".join(f"{v:.6g}" for v in prior.q)
    _log(f"points: {ds.n}  dims: {ds.dims}  k: {args.k}  prior: ({q})")
    _log(f"local clusters: {res.topograph.n_nodes}  edges: {res.topograph.n_edges}  "
         f"clusters: {res.n_clusters}")
    _log("timings: " + "  ".join(f"{k}={v:.3f}s" for k, v in res.timings.items()))
    if not args.out:
        sys.stdout.write("index,label\n")
        sys.stdout.writelines(f"{i},{v}\n" for i, v in enumerate(res.labels.tolist()))
    return 0


def _read_labels(path):
    """Labels from a CSV: the ``label`` column if the first row names one, else the last column."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path} contains no data rows")
    col = -1
    names = [c.strip() for c in rows[0]]
    # label values may be non-numeric, so only a "label" column name marks a header
    if "label" in names:
        col = names.index("label")
        rows = rows[1:]
    out = []
    for r, row in enumerate(rows, start=1):
        try:
            out.append(row[col].strip())
        except IndexError:
            raise DataError("missing label field", row=r) from None
    return np.array(out)


def _canonical(labels):
    # "1" and "1.0" name the same class
    out = []
    for v in labels:
        try:
            f = float(v)
            out.append(str(int(f)) if f.is_integer() else v)
        except ValueError:
            out.append(v)
    return np.array(out)


def cmd_eval(args):
    pred = _canonical(_read_labels(args.pred))
    truth = _canonical(_read_labels(args.truth))
    if pred.size != truth.size:
        raise DataError(f"row counts differ: {pred.size} predictions vs {truth.size} truth labels")
    out = evaluate(pred, truth, noise_label=args.noise_label, matching=args.matching)
    print(json.dumps(out))
    return 0


def cmd_gen(args):
    spec = SyntheticSpec(
        shape=args.shape,
        n=args.n,
        seed=args.seed,
        gaussian_noise=args.noise,
        uniform_noise_fraction=args.uniform_noise,
        scale_factor=args.scale,
        mix_scale=args.mix_scale,
    )
    ds, labels = generate(spec)
    header = [f"x{t}" for t in range(ds.dims)] + ["label"]
    save_csv(args.out, ds.points, labels.tolist(), header=header)
    sidecar = Path(str(args.out) + ".json")
    sidecar.write_text(spec.to_json() + "\n", encoding="utf-8")
    _log(f"wrote {ds.n} points, {len(set(labels.tolist()) - {-1})} classes to {args.out} (+ {sidecar.name})")
    return 0


def cmd_graph(args):
    ds = _load_points(args)
    res = run_git(ds, GitConfig(k=args.k, prior=1, weight_mode=args.weight_mode))
    text = export_graph(res.topograph, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    _log(f"local clusters: {res.topograph.n_nodes}  edges: {res.topograph.n_edges}")
    return 0


def cmd_bench(args):
    points = [int(float(v)) for v in args.points.split(",") if v.strip()]
    fixed = {key: val for key, val in (("n", args.n), ("dim", args.dim), ("k", args.k)) if val is not None}
    rows = run_bench(args.sweep, points, repeat=args.repeat, seed=args.seed, **fixed)
    for row in rows:
        _log(f"n={row['n']} dims={row['dims']} k={row['k']}: {row['seconds']:.3f}s")
    print(json.dumps(rows, indent=1))
    return 0


def _input_args(p):
    p.add_argument("input", help="CSV of points, one row per point")
    p.add_argument("--header", action="store_true", help="first row is a header (auto-detected otherwise)")
    p.add_argument("--label-column", default=None,
                   help="column to drop before clustering: index, header name or 'last'")
    p.add_argument("--k", type=int, default=20, help="neighbour count (default 20)")
    p.add_argument("--weight-mode", choices=WEIGHT_MODES, default="pairwise_exp")


def build_parser():
    parser = argparse.ArgumentParser(prog="gitcluster", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a CSV file")
    _input_args(p)
    prior = p.add_mutually_exclusive_group(required=True)
    prior.add_argument("--classes", type=int, help="class count, uniform proportions")
    prior.add_argument("--proportions", help="comma-separated class proportions, e.g. 0.5,0.3,0.2")
    p.add_argument("--out", help="labels CSV (index,label); standard output if omitted")
    p.add_argument("--graph", help="write the topo-graph here (.dot for DOT, JSON otherwise)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="score predicted labels against truth")
    p.add_argument("pred")
    p.add_argument("truth")
    p.add_argument("--noise-label", default="-1", help="truth label excluded from scoring")
    p.add_argument("--matching", choices=("hungarian", "majority"), default="hungarian")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a synthetic benchmark")
    p.add_argument("--shape", choices=SHAPES, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.0, help="Gaussian jitter std")
    p.add_argument("--uniform-noise", type=float, default=0.0, help="fraction of uniform noise points")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--mix-scale", type=float, default=None, help="append a copy scaled by this factor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("graph", help="export the topo-graph of a CSV file")
    _input_args(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("bench", help="time the pipeline on two-Gaussian mixtures")
    p.add_argument("--sweep", choices=SWEEPS, required=True)
    p.add_argument("--points", required=True, help="comma-separated grid for the swept axis")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RUNTIME_ERRORS as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
