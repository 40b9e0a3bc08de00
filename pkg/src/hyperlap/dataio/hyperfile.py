"""Canonical JSON serialization for hypergraphs.

The on-disk document is::

    {
      "format": "hyperlap/1",
      "num_nodes": <int>,
      "edges": [[members...], ...],   # members ascending, edges sorted
      "weights": [..],
      "labels": [..] | null,
      "names": {..} | null
    }

Edges are written sorted by (members, weight, name) so that two equal
hypergraphs always produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import SchemaVersionMismatch, ValidationError
from ..hypergraph import Hypergraph

__all__ = ["FORMAT_VERSION", "save_hypergraph", "load_hypergraph"]

FORMAT_VERSION = "hyperlap/1"


def save_hypergraph(H: Hypergraph, path, labels=None, names=None) -> None:
    """Write H (plus optional labels / name metadata) as canonical JSON."""
    edge_names = None
    if names is not None and "edges" in names:
        edge_names = list(names["edges"])
        if len(edge_names) != H.num_edges:
            raise ValidationError(
                f"{len(edge_names)} edge names for {H.num_edges} edges"
            )
    order = sorted(
        range(H.num_edges),
        key=lambda i: (
            H.edges[i],
            float(H.weights[i]),
            edge_names[i] if edge_names is not None else "",
        ),
    )
    doc = {
        "format": FORMAT_VERSION,
        "num_nodes": int(H.num_nodes),
        "edges": [list(H.edges[i]) for i in order],
        "weights": [float(H.weights[i]) for i in order],
        "labels": None if labels is None else [int(x) for x in labels],
        "names": None,
    }
    if names is not None:
        out = dict(names)
        if edge_names is not None:
            out["edges"] = [edge_names[i] for i in order]
        doc["names"] = out
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_hypergraph(path):
    """Read a hypergraph file; returns (Hypergraph, labels, names).

    labels come back as an int64 array (or None); malformed JSON or a
    missing/unknown format tag raises SchemaVersionMismatch.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaVersionMismatch(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_VERSION:
        raise SchemaVersionMismatch(
            f"{path}: expected format {FORMAT_VERSION!r}, "
            f"got {doc.get('format') if isinstance(doc, dict) else type(doc).__name__!r}"
        )
    for key in ("num_nodes", "edges", "weights"):
        if key not in doc:
            raise SchemaVersionMismatch(f"{path}: missing field {key!r}")
    H = Hypergraph(doc["num_nodes"], doc["edges"], doc["weights"])
    labels = doc.get("labels")
    if labels is not None:
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (H.num_nodes,):
            raise ValidationError(
                f"{path}: {labels.size} labels for {H.num_nodes} nodes"
            )
    return H, labels, doc.get("names")
