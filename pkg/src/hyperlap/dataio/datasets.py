"""Categorical-dataset ingestion: one hyperedge per (column, value) pair.

Rows of a delimiter-separated file become nodes; for every kept feature
column and every distinct value in it, the rows holding that value form one
unit-weight hyperedge.  Missing values are handled per policy:

* ``drop-membership`` — a missing entry simply keeps the row out of that
  column's edges;
* ``as-category`` — the missing token is an ordinary value and gets an edge;
* ``drop-attribute`` — any column containing the missing token is removed.

Edges with fewer than two members are dropped (configurable), and if the
result is disconnected it is restricted to the largest component with a
warning.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDataset, ParseError, ValidationError
from ..hypergraph import Hypergraph, largest_component

__all__ = [
    "DatasetSpec",
    "PRESETS",
    "preset_spec",
    "ingest",
    "synthetic_rows",
    "write_rows",
]

POLICIES = ("drop-membership", "as-category", "drop-attribute")


@dataclass
class DatasetSpec:
    """How to read one categorical file into a hypergraph."""

    path: str
    delimiter: str = ","
    label_column: int = 0
    feature_columns: object = "all-others"
    missing_token: str = "?"
    missing_policy: str = "as-category"
    drop_trivial_edges: bool = True

    def __post_init__(self):
        if self.missing_policy not in POLICIES:
            raise ValidationError(
                f"missing_policy must be one of {POLICIES}, got {self.missing_policy!r}"
            )
        if self.feature_columns != "all-others":
            cols = [int(c) for c in self.feature_columns]
            if self.label_column in cols:
                raise ValidationError("label_column cannot be a feature column")
            self.feature_columns = cols


# Per-dataset conventions for the standard UCI categorical files.  Column
# counts refer to the raw .data files; id/name columns are excluded from the
# features, and the missing-value policy follows the published hypergraph
# sizes where those are stated.
PRESETS = {
    "mushroom": dict(label_column=0, missing_policy="drop-attribute"),
    "congress": dict(label_column=0, missing_policy="as-category"),
    "cancer": dict(
        label_column=10,
        feature_columns=list(range(1, 10)),
        missing_policy="as-category",
    ),
    "zoo": dict(
        label_column=17,
        feature_columns=list(range(1, 17)),
        missing_policy="as-category",
    ),
    "chess": dict(label_column=36, missing_policy="as-category"),
    "nursery": dict(label_column=8, missing_policy="as-category"),
}


def preset_spec(name: str, path) -> DatasetSpec:
    """DatasetSpec for a known dataset name, pointing at the given file."""
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    return DatasetSpec(path=str(path), **PRESETS[name])


def _read_rows(spec: DatasetSpec):
    rows = []
    with open(spec.path, newline="") as fh:
        width = None
        for lineno, row in enumerate(csv.reader(fh, delimiter=spec.delimiter), start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            row = [cell.strip() for cell in row]
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"expected {width} fields, found {len(row)}", line=lineno
                )
            rows.append(row)
    if not rows:
        raise EmptyDataset(f"no records in {spec.path}")
    return rows, width


def ingest(spec: DatasetSpec):
    """Build (Hypergraph, labels, names) from a categorical file.

    ``labels[i]`` is the class index of node i; ``names`` carries the class
    list, edge descriptions ("column=value"), and the original row number of
    each node (rows can be dropped by component restriction).
    """
    rows, width = _read_rows(spec)
    if not 0 <= spec.label_column < width:
        raise ValidationError(
            f"label_column {spec.label_column} outside 0..{width - 1}"
        )
    if spec.feature_columns == "all-others":
        feat_cols = [c for c in range(width) if c != spec.label_column]
    else:
        feat_cols = list(spec.feature_columns)
        bad = [c for c in feat_cols if not 0 <= c < width]
        if bad:
            raise ValidationError(f"feature columns {bad} outside 0..{width - 1}")

    if spec.missing_policy == "drop-attribute":
        feat_cols = [
            c for c in feat_cols
            if all(row[c] != spec.missing_token for row in rows)
        ]

    edges = []
    edge_names = []
    for c in feat_cols:
        by_value: dict = {}
        for i, row in enumerate(rows):
            val = row[c]
            if val == spec.missing_token and spec.missing_policy == "drop-membership":
                continue
            by_value.setdefault(val, []).append(i)
        for val in sorted(by_value):
            members = by_value[val]
            if spec.drop_trivial_edges and len(members) < 2:
                continue
            edges.append(members)
            edge_names.append(f"c{c}={val}")

    class_names = sorted({row[spec.label_column] for row in rows})
    class_index = {name: i for i, name in enumerate(class_names)}
    labels = np.array(
        [class_index[row[spec.label_column]] for row in rows], dtype=np.int64
    )

    n = len(rows)
    weights = [1.0] * len(edges)
    H, kept = largest_component(n, edges, weights)
    if H.num_nodes < n:
        warnings.warn(
            f"{spec.path}: restricted to largest component "
            f"({H.num_nodes} of {n} rows kept)",
            stacklevel=2,
        )
        labels = labels[kept]
    kept_set = set(int(v) for v in kept)
    kept_edge_names = []
    for name, members in zip(edge_names, edges):
        if members[0] in kept_set:
            kept_edge_names.append(name)
    names = {
        "classes": class_names,
        "edges": kept_edge_names,
        "nodes": [str(int(v)) for v in kept],
    }
    return H, labels, names


def synthetic_rows(
    n_rows: int,
    n_features: int,
    n_values: int = 4,
    flip: float = 0.1,
    missing_rate: float = 0.0,
    seed: int = 0,
    class_names=("e", "p"),
):
    """Planted two-class categorical rows (label in column 0).

    Each feature's value tracks the row's class with probability 1 - flip,
    so low flip rates give separable hypergraphs at any scale.  Returns
    (rows, labels) with labels the planted class indices.
    """
    if n_values < 2:
        raise ValidationError("need at least two values per feature")
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, size=n_rows)
    alphabet = [chr(ord("a") + i) for i in range(n_values)]
    rows = []
    for i in range(n_rows):
        row = [class_names[labels[i]]]
        for _ in range(n_features):
            if missing_rate > 0 and rng.random() < missing_rate:
                row.append("?")
                continue
            if rng.random() < flip:
                row.append(alphabet[rng.integers(0, n_values)])
            else:
                row.append(alphabet[labels[i] % n_values])
        rows.append(row)
    return rows, labels.astype(np.int64)


def write_rows(rows, path, delimiter: str = ",") -> None:
    """Write rows as a delimiter-separated file (one record per line)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerows(rows)
