"""Command-line front end.

Subcommands::

    convert   categorical file -> hypergraph JSON
    info      structural summary of a hypergraph file
    check     invariant battery (operator identities) on a hypergraph file
    ssl       label-propagation benchmark -> CSV records
    cut       two-class or multiclass cut benchmark -> CSV records
    sweep-p   two-class cuts across a p grid -> CSV records

Exit codes: 0 success, 2 on validation/parse errors or failed checks, 3 on
solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from ..calculus import (
    EdgeVertexField,
    dirichlet_sum,
    divergence,
    gradient,
    inner_product_edges,
    inner_product_nodes,
)
from ..errors import SolverError, ValidationError
from ..hypergraph import Hypergraph
from ..laplacians import apply_p_laplacian, laplacian_p2, p_coefficients, random_walk
from ..spectral import smallest_eigenpairs
from .datasets import POLICIES, PRESETS, DatasetSpec, ingest, preset_spec
from .experiments import (
    CSV_COLUMNS,
    ExperimentConfig,
    _format_cell,
    emit_csv,
    run_cut_experiment,
    run_ssl_experiment,
    summarize_cut,
    summarize_ssl,
)
from .hyperfile import load_hypergraph, save_hypergraph

__all__ = ["main", "build_parser"]


def _parse_p_grid(text: str):
    """Grid spec: comma-separated values and/or start:stop:step ranges."""
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            parts = token.split(":")
            if len(parts) != 3:
                raise ValidationError(f"bad range {token!r}; use start:stop:step")
            try:
                start, stop, step = (float(x) for x in parts)
            except ValueError as exc:
                raise ValidationError(f"bad range {token!r}") from exc
            if step <= 0:
                raise ValidationError(f"range step must be > 0, got {step}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ValidationError(f"empty range {token!r}")
            values.extend(start + i * step for i in range(count))
        else:
            try:
                values.append(float(token))
            except ValueError as exc:
                raise ValidationError(f"bad p value {token!r}") from exc
    if not values:
        raise ValidationError(f"empty p grid {text!r}")
    return tuple(values)


def _parse_fractions(text: str):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError(f"bad fraction list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperlap",
        description="Hypergraph p-Laplacian toolkit: ingestion, label "
        "propagation, and normalized-cut clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0, help="root RNG seed")
    seeded.add_argument(
        "--threads", type=int, default=1, help="worker threads for trials"
    )
    seeded.add_argument("--output", help="CSV path (default: stdout)")
    seeded.add_argument(
        "--trials", type=int, default=1, help="repetitions per setting"
    )

    p_conv = sub.add_parser("convert", help="build a hypergraph from a categorical file")
    p_conv.add_argument("input", help="delimiter-separated categorical file")
    p_conv.add_argument("--output", required=True, help="hypergraph JSON path")
    p_conv.add_argument(
        "--preset", choices=sorted(PRESETS), help="named dataset conventions"
    )
    p_conv.add_argument("--delimiter", help="field delimiter (default ,)")
    p_conv.add_argument(
        "--policy", choices=POLICIES, help="missing-value policy"
    )
    p_conv.add_argument("--label-col", type=int, help="class column index")
    p_conv.add_argument("--missing-token", help="missing-value token (default ?)")
    p_conv.add_argument(
        "--keep-trivial",
        action="store_true",
        help="keep single-member value edges instead of dropping them",
    )
    p_conv.set_defaults(func=cmd_convert)

    p_info = sub.add_parser("info", help="print a structural summary")
    p_info.add_argument("file", help="hypergraph JSON path")
    p_info.set_defaults(func=cmd_info)

    p_check = sub.add_parser("check", help="run the operator invariant battery")
    p_check.add_argument("file", help="hypergraph JSON path")
    p_check.add_argument("--seed", type=int, default=0, help="RNG seed")
    p_check.set_defaults(func=cmd_check)

    p_ssl = sub.add_parser(
        "ssl", parents=[seeded], help="label-propagation benchmark"
    )
    p_ssl.add_argument("file", help="hypergraph JSON path with labels")
    p_ssl.add_argument("--p", default="2", help="p grid, e.g. 2 or 1.5,2,2.5 or 1.2:3:0.2")
    group = p_ssl.add_mutually_exclusive_group()
    group.add_argument("--mu", type=float, help="fixed regularization strength")
    group.add_argument(
        "--cv", action="store_true", help="choose mu by cross-validation (default)"
    )
    p_ssl.add_argument(
        "--fraction", default="0.1", help="labeled fractions, e.g. 0.05,0.1,0.2"
    )
    p_ssl.add_argument("--folds", type=int, default=5, help="CV folds")
    p_ssl.set_defaults(func=cmd_ssl)

    p_cut = sub.add_parser(
        "cut", parents=[seeded], help="normalized-cut benchmark"
    )
    p_cut.add_argument("file", help="hypergraph JSON path with labels")
    p_cut.add_argument("--p", default="2", help="p for the two-class cut")
    p_cut.add_argument(
        "--k", type=int, help="cluster count; enables the multiclass p=2 path"
    )
    p_cut.set_defaults(func=cmd_cut)

    p_sweep = sub.add_parser(
        "sweep-p", parents=[seeded], help="two-class cuts across a p grid"
    )
    p_sweep.add_argument("file", help="hypergraph JSON path with labels")
    p_sweep.add_argument(
        "--p", default="1.5,2,2.5", help="p grid, e.g. 1.2:3:0.2"
    )
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def cmd_convert(args) -> int:
    if args.preset:
        spec = preset_spec(args.preset, args.input)
        if args.delimiter is not None:
            spec.delimiter = args.delimiter
        if args.policy is not None:
            spec.missing_policy = args.policy
        if args.label_col is not None:
            spec.label_column = args.label_col
        if args.missing_token is not None:
            spec.missing_token = args.missing_token
        if args.keep_trivial:
            spec.drop_trivial_edges = False
    else:
        spec = DatasetSpec(
            path=args.input,
            delimiter=args.delimiter if args.delimiter is not None else ",",
            label_column=args.label_col if args.label_col is not None else 0,
            missing_token=args.missing_token if args.missing_token is not None else "?",
            missing_policy=args.policy if args.policy is not None else "as-category",
            drop_trivial_edges=not args.keep_trivial,
        )
    H, labels, names = ingest(spec)
    save_hypergraph(H, args.output, labels=labels, names=names)
    print(
        f"{args.output}: {H.num_nodes} nodes, {H.num_edges} edges, "
        f"total membership {H.total_membership}, "
        f"{len(names['classes'])} classes"
    )
    return 0


def cmd_info(args) -> int:
    H, labels, names = load_hypergraph(args.file)
    sizes = H.edge_sizes
    print(f"nodes            {H.num_nodes}")
    print(f"edges            {H.num_edges}")
    print(f"total membership {H.total_membership}")
    print(f"volume           {H.degrees.sum():g}")
    print(
        f"node degree      min {H.degrees.min():g}  "
        f"mean {H.degrees.mean():g}  max {H.degrees.max():g}"
    )
    print(
        f"edge size        min {sizes.min()}  "
        f"mean {sizes.mean():g}  max {sizes.max()}"
    )
    if labels is not None:
        counts = np.bincount(labels)
        class_names = None
        if names and "classes" in names:
            class_names = names["classes"]
        for c, cnt in enumerate(counts):
            tag = class_names[c] if class_names and c < len(class_names) else str(c)
            print(f"class {tag:<10} {cnt}")
    return 0


def _check_battery(H: Hypergraph, seed: int):
    """Yield (name, ok, detail) for each structural/operator invariant."""
    rng = np.random.default_rng(seed)
    n = H.num_nodes

    d = np.bincount(
        H.members, weights=np.repeat(H.weights, H.edge_sizes), minlength=n
    )
    err = float(np.max(np.abs(d - H.degrees)))
    yield "degree-identity", err < 1e-10 and np.all(d > 0), f"max dev {err:.2e}"

    worst = 0.0
    for _ in range(5):
        psi = rng.standard_normal(n)
        phi_vals = rng.standard_normal(H.total_membership)
        g = gradient(H, psi)
        phi = EdgeVertexField(H, phi_vals)
        lhs = inner_product_edges(H, g, phi)
        rhs = inner_product_nodes(psi, divergence(H, phi))
        worst = max(worst, abs(lhs + rhs) / (1.0 + abs(lhs)))
    yield "gradient-divergence-adjointness", worst < 1e-10, f"max rel dev {worst:.2e}"

    worst = 0.0
    for p in (1.5, 2.0, 3.0):
        psi = rng.standard_normal(n)
        sp = dirichlet_sum(H, psi, p)
        pairing = inner_product_nodes(psi, apply_p_laplacian(H, psi, p))
        worst = max(worst, abs(pairing - sp) / (1.0 + abs(sp)))
    yield "dirichlet-pairing", worst < 1e-8, f"max rel dev {worst:.2e}"

    worst = 0.0
    h = 1e-6
    for p in (1.5, 2.0, 2.5):
        psi = rng.standard_normal(n)
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        fd = (dirichlet_sum(H, psi + h * u, p) - dirichlet_sum(H, psi - h * u, p)) / (
            2 * h
        )
        an = p * float(apply_p_laplacian(H, psi, p) @ u)
        worst = max(worst, abs(fd - an) / (1.0 + abs(an)))
    yield "dirichlet-gradient", worst < 1e-4, f"max rel dev {worst:.2e}"

    L = laplacian_p2(H)
    psi = rng.standard_normal(n)
    dev = abs(float(psi @ L(psi)) - dirichlet_sum(H, psi, 2.0))
    consistent = float(np.max(np.abs(L(psi) - apply_p_laplacian(H, psi, 2.0))))
    try:
        pairs = smallest_eigenpairs(L, 1, H.degrees)
        lam1 = float(pairs.values[0])
        psd_ok = lam1 > -1e-8
        psd_note = f"lambda_1 {lam1:.2e}"
    except SolverError as exc:
        psd_ok, psd_note = False, f"eigensolver: {exc}"
    yield (
        "p2-quadratic-form",
        dev < 1e-8 * (1.0 + dirichlet_sum(H, psi, 2.0)) and consistent < 1e-10,
        f"form dev {dev:.2e}, apply dev {consistent:.2e}",
    )
    yield "p2-positive-semidefinite", psd_ok, psd_note

    P, pi = random_walk(H)
    rows = float(np.max(np.abs(P(np.ones(n)) - 1.0)))
    stat = 0.0
    for _ in range(5):
        x = rng.standard_normal(n)
        stat = max(stat, abs(float(pi @ P(x)) - float(pi @ x)))
    yield "random-walk-stochastic", rows < 1e-12, f"max row dev {rows:.2e}"
    yield "random-walk-stationarity", stat < 1e-10, f"max dev {stat:.2e}"

    pair_count = int(np.sum(H.edge_sizes * (H.edge_sizes - 1) // 2))
    if pair_count > 2_000_000:
        yield "coefficient-row-sums", None, f"skipped ({pair_count} pairs)"
    else:
        worst = 0.0
        for p in (1.5, 2.5):
            psi = rng.standard_normal(n)
            coeffs = p_coefficients(H, psi, p)
            rows_sum = np.zeros(n)
            for (u, v), w in coeffs.pair_weights.items():
                rows_sum[u] += w
                rows_sum[v] += w
            dev = float(np.max(np.abs(rows_sum - coeffs.node_coeffs)))
            worst = max(worst, dev / (1.0 + float(np.max(np.abs(coeffs.node_coeffs)))))
        yield "coefficient-row-sums", worst < 1e-10, f"max rel dev {worst:.2e}"


def cmd_check(args) -> int:
    H, _, _ = load_hypergraph(args.file)
    failures = 0
    total = 0
    for name, ok, detail in _check_battery(H, args.seed):
        if ok is None:
            print(f"SKIP {name}: {detail}")
            continue
        total += 1
        if ok:
            print(f"PASS {name} ({detail})")
        else:
            failures += 1
            print(f"FAIL {name} ({detail})")
    if failures:
        print(f"{failures} of {total} checks failed")
        return 2
    print(f"all {total} checks passed")
    return 0


def _write_records(records, output):
    if output:
        emit_csv(records, output)
        return sys.stdout
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_format_cell(c, getattr(rec, c)) for c in CSV_COLUMNS])
    return sys.stderr


def _load_labeled(path):
    H, labels, names = load_hypergraph(path)
    if labels is None:
        raise ValidationError(f"{path}: no labels embedded; benchmarks need them")
    return H, labels, names


def cmd_ssl(args) -> int:
    H, labels, _ = _load_labeled(args.file)
    cfg = ExperimentConfig(
        task="ssl",
        p=_parse_p_grid(args.p),
        mu=args.mu if args.mu is not None else "cv",
        fractions=_parse_fractions(args.fraction),
        trials=args.trials,
        seed=args.seed,
        folds=args.folds,
        threads=args.threads,
        dataset=Path(args.file).stem,
    )
    records = run_ssl_experiment(H, labels, cfg)
    out = _write_records(records, args.output)
    summary = summarize_ssl(records)
    for (p, f), err in sorted(summary["mean_error"].items(), key=lambda kv: (kv[0][1], kv[0][0])):
        print(f"p={p:g} fraction={f:g} mean_error={err:.4f}", file=out)
    for f, (p, err) in sorted(summary["best_p"].items()):
        print(f"fraction={f:g} best_p={p:g} mean_error={err:.4f}", file=out)
    if any("no-convergence" in rec.flags for rec in records):
        return 3
    return 0


def _run_cut(args, task: str, p_grid) -> int:
    H, labels, _ = _load_labeled(args.file)
    cfg = ExperimentConfig(
        task=task,
        p=p_grid,
        fractions=(0.5,),
        trials=args.trials,
        seed=args.seed,
        k=getattr(args, "k", None),
        threads=args.threads,
        dataset=Path(args.file).stem,
    )
    records = run_cut_experiment(H, labels, cfg)
    out = _write_records(records, args.output)
    summary = summarize_cut(records)
    for p in sorted(summary["mean_error"]):
        print(
            f"p={p:g} mean_error={summary['mean_error'][p]:.4f} "
            f"mean_ncut={summary['mean_ncut'][p]:.6f}",
            file=out,
        )
    best = summary["argmin_p"]
    if best is not None and len(summary["mean_error"]) > 1:
        print(f"best_p={best[0]:g} mean_error={best[1]:.4f}", file=out)
    return 0


def cmd_cut(args) -> int:
    task = "cutk" if args.k is not None else "cut2"
    grid = _parse_p_grid(args.p)
    return _run_cut(args, task, grid)


def cmd_sweep(args) -> int:
    return _run_cut(args, "sweep-p", _parse_p_grid(args.p))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
