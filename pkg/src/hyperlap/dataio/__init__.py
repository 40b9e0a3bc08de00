"""Dataset ingestion, hypergraph serialization, experiments, and the CLI."""

from .datasets import (
    DatasetSpec,
    PRESETS,
    ingest,
    preset_spec,
    synthetic_rows,
    write_rows,
)
from .experiments import (
    CSV_COLUMNS,
    ExperimentConfig,
    ResultRecord,
    emit_csv,
    load_records,
    run_cut_experiment,
    run_ssl_experiment,
    summarize_cut,
    summarize_ssl,
)
from .hyperfile import FORMAT_VERSION, load_hypergraph, save_hypergraph

__all__ = [
    "DatasetSpec",
    "PRESETS",
    "ingest",
    "preset_spec",
    "synthetic_rows",
    "write_rows",
    "ExperimentConfig",
    "ResultRecord",
    "CSV_COLUMNS",
    "emit_csv",
    "load_records",
    "run_ssl_experiment",
    "run_cut_experiment",
    "summarize_ssl",
    "summarize_cut",
    "FORMAT_VERSION",
    "save_hypergraph",
    "load_hypergraph",
]
