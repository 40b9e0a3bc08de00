"""Experiment drivers: label propagation and cut benchmarks over seeds/grids.

Every run is a pure function of (hypergraph, labels, config): each
(fraction, trial) job owns an RNG seeded from ``[seed, fraction_idx,
trial]``, so records are reproducible regardless of thread scheduling.
Output records are sorted by (labeled_fraction, p, trial).
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from ..errors import ParseError, ValidationError
from ..hypergraph import Hypergraph
from ..ssl import SSLProblem, closed_form_p2, cross_validate_mu, predict, solve
from ..spectral import (
    error_rate,
    multiclass_cut_p2,
    two_class_cut_p,
    two_class_cut_p2,
)

__all__ = [
    "TASKS",
    "ExperimentConfig",
    "ResultRecord",
    "CSV_COLUMNS",
    "run_ssl_experiment",
    "run_cut_experiment",
    "emit_csv",
    "load_records",
    "summarize_ssl",
    "summarize_cut",
]

TASKS = ("ssl", "cut2", "cutk", "sweep-p")


@dataclass
class ExperimentConfig:
    """What to run: task, p grid, regularization, label fractions, seeds."""

    task: str
    p: object = 2.0
    mu: object = "cv"
    fractions: tuple = (0.1,)
    trials: int = 1
    seed: int = 0
    k: object = None
    folds: int = 5
    threads: int = 1
    dataset: str = ""

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValidationError(f"task must be one of {TASKS}, got {self.task!r}")
        grid = self.p if isinstance(self.p, (list, tuple, np.ndarray)) else [self.p]
        grid = tuple(float(p) for p in grid)
        if not grid:
            raise ValidationError("p grid is empty")
        for p in grid:
            if p < 1.0:
                raise ValidationError(f"p must be >= 1, got {p}")
        if self.task == "cutk" and any(p != 2.0 for p in grid):
            raise ValidationError("multiclass cuts are computed at p=2 only")
        self.p = grid
        if self.mu != "cv":
            mu = float(self.mu)
            if not mu > 0:
                raise ValidationError(f"mu must be > 0, got {mu}")
            self.mu = mu
        fractions = tuple(float(f) for f in self.fractions)
        for f in fractions:
            if not 0.0 < f <= 1.0:
                raise ValidationError(f"fractions must lie in (0, 1], got {f}")
        self.fractions = fractions
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if self.folds < 2:
            raise ValidationError(f"folds must be >= 2, got {self.folds}")
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1, got {self.threads}")
        if self.k is not None and int(self.k) < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")


@dataclass
class ResultRecord:
    """One (task, p, fraction, trial) outcome; field order fixes CSV columns."""

    dataset: str
    task: str
    p: float
    mu: object
    labeled_fraction: float
    trial: int
    seed: int
    error_rate: float
    ncut_value: object
    iterations: int
    wall_time: float
    flags: str = ""


CSV_COLUMNS = tuple(f.name for f in fields(ResultRecord))


def _job_seed(*path) -> int:
    """Stable child seed for a worker identified by its index path."""
    return int(np.random.SeedSequence([int(x) for x in path]).generate_state(1)[0])


def _stratified_draw(labels: np.ndarray, fraction: float, rng) -> np.ndarray:
    """Node ids of the labeled sample: at least one per class, ~fraction each."""
    picked = []
    for value in np.unique(labels):
        idx = np.flatnonzero(labels == value)
        count = min(idx.size, max(1, int(round(fraction * idx.size))))
        picked.append(rng.choice(idx, size=count, replace=False))
    return np.sort(np.concatenate(picked))


def _run_jobs(jobs, threads: int):
    if threads == 1:
        results = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = [f.result() for f in [pool.submit(job) for job in jobs]]
    records = [rec for group in results for rec in group]
    records.sort(key=lambda r: (r.labeled_fraction, r.p, r.trial))
    return records


def run_ssl_experiment(H: Hypergraph, labels, cfg: ExperimentConfig):
    """Label-propagation benchmark; scores error on the unlabeled nodes."""
    if cfg.task != "ssl":
        raise ValidationError(f"config task is {cfg.task!r}, expected 'ssl'")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (H.num_nodes,):
        raise ValidationError(f"{labels.size} labels for {H.num_nodes} nodes")
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValidationError(
            f"label propagation needs two classes, got {classes.size}"
        )
    signs = np.where(labels == classes[1], 1.0, -1.0)

    def job(fi: int, fraction: float, trial: int):
        rng = np.random.default_rng([cfg.seed, fi, trial])
        labeled_ids = _stratified_draw(labels, fraction, rng)
        labeled = {int(v): int(signs[v]) for v in labeled_ids}
        unlabeled = np.ones(H.num_nodes, dtype=bool)
        unlabeled[labeled_ids] = False
        y = np.zeros(H.num_nodes)
        y[labeled_ids] = signs[labeled_ids]
        cv_seed = _job_seed(cfg.seed, fi, trial, 1)
        out = []
        for p in cfg.p:
            start = time.perf_counter()
            flags = []
            if cfg.mu == "cv":
                mu = cross_validate_mu(
                    H, labeled, p, folds=cfg.folds, seed=cv_seed
                )
            else:
                mu = cfg.mu
            if p == 2.0:
                psi = closed_form_p2(H, y, mu)
                iterations = 0
            else:
                res = solve(SSLProblem(H, y, mu, p))
                psi = res.psi
                iterations = res.iterations
                if not res.converged:
                    flags.append("no-convergence")
            if np.any(unlabeled):
                err = float(
                    np.mean(predict(psi)[unlabeled] != signs[unlabeled])
                )
            else:
                err = 0.0
                flags.append("degenerate-all-labeled")
            out.append(
                ResultRecord(
                    dataset=cfg.dataset,
                    task=cfg.task,
                    p=p,
                    mu=mu,
                    labeled_fraction=fraction,
                    trial=trial,
                    seed=cfg.seed,
                    error_rate=err,
                    ncut_value=None,
                    iterations=iterations,
                    wall_time=time.perf_counter() - start,
                    flags=";".join(flags),
                )
            )
        return out

    jobs = [
        (lambda fi=fi, f=f, t=t: job(fi, f, t))
        for fi, f in enumerate(cfg.fractions)
        for t in range(cfg.trials)
    ]
    return _run_jobs(jobs, cfg.threads)


def run_cut_experiment(H: Hypergraph, labels, cfg: ExperimentConfig):
    """Unsupervised cut benchmark; labels are used only for scoring."""
    if cfg.task not in ("cut2", "cutk", "sweep-p"):
        raise ValidationError(f"config task is {cfg.task!r}, expected a cut task")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (H.num_nodes,):
        raise ValidationError(f"{labels.size} labels for {H.num_nodes} nodes")
    n_classes = int(np.unique(labels).size)

    def job(p: float, trial: int):
        start = time.perf_counter()
        flags = []
        if cfg.task == "cutk":
            k = n_classes if cfg.k is None else int(cfg.k)
            part = multiclass_cut_p2(H, k, seed=_job_seed(cfg.seed, trial))
            iterations = 0
        elif p == 2.0:
            part = two_class_cut_p2(H)
            iterations = 0
        else:
            part = two_class_cut_p(H, p)
            iterations = int(part.metadata.get("iterations", 0))
            if part.metadata.get("no_descent"):
                flags.append("no-descent")
        rec = ResultRecord(
            dataset=cfg.dataset,
            task=cfg.task,
            p=p,
            mu=None,
            labeled_fraction=0.0,
            trial=trial,
            seed=cfg.seed,
            error_rate=error_rate(part.assignment, labels),
            ncut_value=part.ncut_value,
            iterations=iterations,
            wall_time=time.perf_counter() - start,
            flags=";".join(flags),
        )
        return [rec]

    jobs = [
        (lambda p=p, t=t: job(p, t))
        for p in cfg.p
        for t in range(cfg.trials)
    ]
    return _run_jobs(jobs, cfg.threads)


_FLOAT_FIELDS = ("p", "mu", "labeled_fraction", "error_rate", "ncut_value", "wall_time")
_INT_FIELDS = ("trial", "seed", "iterations")


def _format_cell(name: str, value) -> str:
    if value is None:
        return ""
    if name in _FLOAT_FIELDS:
        return "%.17g" % float(value)
    return str(value)


def emit_csv(records, path) -> None:
    """Write records as CSV with a fixed header and 17-digit floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(
                [_format_cell(name, getattr(rec, name)) for name in CSV_COLUMNS]
            )


def load_records(path):
    """Parse a file written by emit_csv back into ResultRecord objects."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty records file", line=1) from None
        if tuple(header) != CSV_COLUMNS:
            raise ParseError(
                f"header {header} does not match {list(CSV_COLUMNS)}", line=1
            )
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(CSV_COLUMNS):
                raise ParseError(
                    f"expected {len(CSV_COLUMNS)} fields, found {len(row)}",
                    line=lineno,
                )
            kw = dict(zip(CSV_COLUMNS, row))
            for name in _FLOAT_FIELDS:
                kw[name] = None if kw[name] == "" else float(kw[name])
            for name in _INT_FIELDS:
                kw[name] = int(kw[name])
            records.append(ResultRecord(**kw))
    return records


def summarize_ssl(records):
    """Mean error per (p, fraction) plus the best p at each fraction."""
    sums: dict = {}
    for rec in records:
        key = (rec.p, rec.labeled_fraction)
        total, count = sums.get(key, (0.0, 0))
        sums[key] = (total + rec.error_rate, count + 1)
    mean_error = {key: total / count for key, (total, count) in sums.items()}
    best_p: dict = {}
    for (p, f), err in sorted(mean_error.items()):
        if f not in best_p or err < best_p[f][1]:
            best_p[f] = (p, err)
    return {"mean_error": mean_error, "best_p": best_p}


def summarize_cut(records):
    """Mean error and cut value per p, plus the argmin-p by error."""
    sums: dict = {}
    for rec in records:
        err_t, cut_t, count = sums.get(rec.p, (0.0, 0.0, 0))
        cut = 0.0 if rec.ncut_value is None else rec.ncut_value
        sums[rec.p] = (err_t + rec.error_rate, cut_t + cut, count + 1)
    mean_error = {p: e / c for p, (e, _, c) in sums.items()}
    mean_ncut = {p: s / c for p, (_, s, c) in sums.items()}
    best = min(sorted(mean_error.items()), key=lambda kv: kv[1], default=None)
    return {"mean_error": mean_error, "mean_ncut": mean_ncut, "argmin_p": best}
