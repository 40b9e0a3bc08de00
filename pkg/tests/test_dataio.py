import numpy as np
import pytest

from hyperlap import Hypergraph
from hyperlap.dataio import (
    CSV_COLUMNS,
    DatasetSpec,
    ExperimentConfig,
    PRESETS,
    ResultRecord,
    emit_csv,
    ingest,
    load_hypergraph,
    load_records,
    preset_spec,
    run_cut_experiment,
    run_ssl_experiment,
    save_hypergraph,
    summarize_cut,
    summarize_ssl,
    synthetic_rows,
    write_rows,
)
from hyperlap.errors import (
    EmptyDataset,
    ParseError,
    SchemaVersionMismatch,
    ValidationError,
)

from conftest import random_hypergraph


def write_text(path, text):
    path.write_text(text)
    return str(path)


def planted_dataset(tmp_path, n_rows=200, n_features=6, flip=0.05, seed=2):
    rows, labels = synthetic_rows(n_rows, n_features, flip=flip, seed=seed)
    path = tmp_path / "planted.data"
    write_rows(rows, path)
    return str(path), labels


# ---------------------------------------------------------------- datasets


def test_ingest_toy_restricts_to_largest_component(tmp_path):
    path = write_text(tmp_path / "toy.data", "x,a\nx,a\ny,b\n")
    with pytest.warns(UserWarning, match="largest component"):
        H, labels, names = ingest(DatasetSpec(path))
    assert H.num_nodes == 2
    assert H.num_edges == 1
    assert H.edges == ((0, 1),)
    assert labels.tolist() == [0, 0]
    assert names["classes"] == ["x", "y"]
    assert names["edges"] == ["c1=a"]
    assert names["nodes"] == ["0", "1"]


def test_ingest_deterministic(tmp_path):
    path, _ = planted_dataset(tmp_path)
    a = ingest(DatasetSpec(path))
    b = ingest(DatasetSpec(path))
    assert a[0] == b[0]
    assert np.array_equal(a[1], b[1])
    assert a[2] == b[2]


MISSING_FILE = "x,a,?,k\nx,a,?,k\ny,b,m,k\ny,b,m,k\n"


def test_missing_as_category(tmp_path):
    path = write_text(tmp_path / "m.data", MISSING_FILE)
    H, _, names = ingest(DatasetSpec(path, missing_policy="as-category"))
    assert H.num_nodes == 4
    assert names["edges"] == ["c1=a", "c1=b", "c2=?", "c2=m", "c3=k"]


def test_missing_drop_membership(tmp_path):
    path = write_text(tmp_path / "m.data", MISSING_FILE)
    H, _, names = ingest(DatasetSpec(path, missing_policy="drop-membership"))
    assert names["edges"] == ["c1=a", "c1=b", "c2=m", "c3=k"]


def test_missing_drop_attribute(tmp_path):
    path = write_text(tmp_path / "m.data", MISSING_FILE)
    H, _, names = ingest(DatasetSpec(path, missing_policy="drop-attribute"))
    assert names["edges"] == ["c1=a", "c1=b", "c3=k"]
    assert all(not name.startswith("c2") for name in names["edges"])


def test_parse_error_line_numbers(tmp_path):
    path = write_text(tmp_path / "bad.data", "a,b\nc\n")
    with pytest.raises(ParseError) as info:
        ingest(DatasetSpec(path))
    assert info.value.line == 2
    # blank lines are skipped but still counted for error positions
    path = write_text(tmp_path / "bad2.data", "a,b\n\nc\n")
    with pytest.raises(ParseError) as info:
        ingest(DatasetSpec(path))
    assert info.value.line == 3


def test_empty_dataset(tmp_path):
    path = write_text(tmp_path / "empty.data", "\n\n")
    with pytest.raises(EmptyDataset):
        ingest(DatasetSpec(path))


def test_spec_validation(tmp_path):
    path = write_text(tmp_path / "two.data", "x,a\ny,a\n")
    with pytest.raises(ValidationError):
        ingest(DatasetSpec(path, label_column=5))
    with pytest.raises(ValidationError):
        ingest(DatasetSpec(path, feature_columns=[3]))
    with pytest.raises(ValidationError):
        DatasetSpec(path, label_column=1, feature_columns=[1])
    with pytest.raises(ValidationError):
        DatasetSpec(path, missing_policy="ignore")


def test_synthetic_rows_planted_structure():
    rows, labels = synthetic_rows(10, 3, flip=0.0, seed=1)
    assert len(rows) == 10
    for row, lab in zip(rows, labels):
        assert row[0] == ("e", "p")[lab]
        assert all(cell == "ab"[lab] for cell in row[1:])
    with pytest.raises(ValidationError):
        synthetic_rows(5, 2, n_values=1)


def test_synthetic_ingest_recovers_planted(tmp_path):
    path, planted = planted_dataset(tmp_path)
    H, labels, names = ingest(DatasetSpec(path))
    assert H.num_nodes == 200  # connected at this flip rate: nothing dropped
    assert names["classes"] == ["e", "p"]
    assert np.array_equal(labels, planted)


def test_write_rows_round_trip(tmp_path):
    rows = [["a", "b"], ["c", "b"]]
    path = tmp_path / "rt.data"
    write_rows(rows, path, delimiter=";")
    assert path.read_text() == "a;b\nc;b\n"
    H, labels, _ = ingest(DatasetSpec(str(path), delimiter=";"))
    assert H.num_nodes == 2 and labels.tolist() == [0, 1]


def test_presets():
    assert sorted(PRESETS) == [
        "cancer",
        "chess",
        "congress",
        "mushroom",
        "nursery",
        "zoo",
    ]
    spec = preset_spec("mushroom", "/tmp/x.data")
    assert spec.label_column == 0
    assert spec.missing_policy == "drop-attribute"
    spec = preset_spec("zoo", "zoo.data")
    assert spec.label_column == 17
    assert spec.feature_columns == list(range(1, 17))
    with pytest.raises(ValidationError):
        preset_spec("imagenet", "x")


# --------------------------------------------------------------- hyperfile


def test_hyperfile_round_trip(tmp_path, G2):
    labels = np.array([0, 0, 1, 1])
    names = {"classes": ["x", "y"], "edges": ["first", "second"]}
    path = tmp_path / "g2.json"
    save_hypergraph(G2, path, labels=labels, names=names)
    H, lab, nm = load_hypergraph(path)
    assert H == G2
    assert np.array_equal(lab, labels)
    assert nm == names


def test_hyperfile_round_trip_no_metadata(tmp_path):
    rng = np.random.default_rng(0)
    for _ in range(5):
        H = random_hypergraph(rng)
        path = tmp_path / "h.json"
        save_hypergraph(H, path)
        loaded, lab, nm = load_hypergraph(path)
        assert lab is None and nm is None
        assert loaded.num_nodes == H.num_nodes
        assert sorted(loaded.edges) == sorted(H.edges)


def test_hyperfile_canonical_bytes(tmp_path, G2):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_hypergraph(G2, a)
    save_hypergraph(G2, b)
    assert a.read_bytes() == b.read_bytes()
    # permuting the edge list must not change the serialization
    permuted = Hypergraph(4, [[2, 3], [0, 1, 2]], [1.0, 1.0])
    save_hypergraph(permuted, b)
    assert a.read_bytes() == b.read_bytes()


def test_hyperfile_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all")
    with pytest.raises(SchemaVersionMismatch):
        load_hypergraph(bad)
    bad.write_text('{"format": "other/9"}')
    with pytest.raises(SchemaVersionMismatch):
        load_hypergraph(bad)
    bad.write_text('{"format": "hyperlap/1", "num_nodes": 3, "edges": [[0, 1, 2]]}')
    with pytest.raises(SchemaVersionMismatch):
        load_hypergraph(bad)
    bad.write_text(
        '{"format": "hyperlap/1", "num_nodes": 3, "edges": [[0, 1, 2]],'
        ' "weights": [1.0], "labels": [0]}'
    )
    with pytest.raises(ValidationError):
        load_hypergraph(bad)


def test_hyperfile_edge_name_length_check(tmp_path, G2):
    with pytest.raises(ValidationError):
        save_hypergraph(G2, tmp_path / "x.json", names={"edges": ["only-one"]})


# ------------------------------------------------------------- experiments


def test_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(task="train")
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", p=())
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", p=0.5)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="cutk", p=2.5)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", mu=0.0)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", fractions=(0.0,))
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", fractions=(1.5,))
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", trials=0)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", folds=1)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="ssl", threads=0)
    with pytest.raises(ValidationError):
        ExperimentConfig(task="cutk", k=1)
    cfg = ExperimentConfig(task="ssl", p=[1.5, 2])
    assert cfg.p == (1.5, 2.0)
    assert ExperimentConfig(task="ssl", mu=10).mu == 10.0


def test_ssl_experiment_separable(tmp_path):
    path, _ = planted_dataset(tmp_path)
    H, labels, _ = ingest(DatasetSpec(path))
    cfg = ExperimentConfig(task="ssl", p=2.0, mu=100.0, fractions=(0.1,), trials=2)
    records = run_ssl_experiment(H, labels, cfg)
    assert len(records) == 2
    for rec in records:
        assert rec.error_rate == 0.0
        assert rec.task == "ssl"
        assert rec.mu == 100.0
        assert rec.iterations == 0  # p=2 takes the closed form
        assert rec.ncut_value is None


def test_ssl_experiment_all_labeled_flag(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=40)
    H, labels, _ = ingest(DatasetSpec(path))
    cfg = ExperimentConfig(task="ssl", p=2.0, mu=1.0, fractions=(1.0,), trials=1)
    records = run_ssl_experiment(H, labels, cfg)
    assert len(records) == 1
    assert records[0].error_rate == 0.0
    assert "degenerate-all-labeled" in records[0].flags


def test_ssl_experiment_deterministic_and_threaded(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=60, flip=0.2, seed=4)
    H, labels, _ = ingest(DatasetSpec(path))
    base = dict(task="ssl", p=(1.5, 2.0), mu=10.0, fractions=(0.2, 0.5), trials=2)
    one = run_ssl_experiment(H, labels, ExperimentConfig(**base))
    two = run_ssl_experiment(H, labels, ExperimentConfig(**base))
    four = run_ssl_experiment(H, labels, ExperimentConfig(**base, threads=4))
    skip = {"wall_time"}
    for other in (two, four):
        assert len(one) == len(other)
        for a, b in zip(one, other):
            for name in CSV_COLUMNS:
                if name in skip:
                    continue
                assert getattr(a, name) == getattr(b, name)


def test_ssl_experiment_cv_mu(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=120)
    H, labels, _ = ingest(DatasetSpec(path))
    cfg = ExperimentConfig(task="ssl", p=2.0, mu="cv", fractions=(0.3,), trials=1)
    records = run_ssl_experiment(H, labels, cfg)
    assert records[0].mu in (1.0, 10.0, 100.0, 1000.0, 10000.0)


def test_ssl_experiment_validation(tmp_path):
    H = Hypergraph(3, [[0, 1, 2]], [1.0])
    with pytest.raises(ValidationError):
        run_ssl_experiment(H, [0, 1, 2], ExperimentConfig(task="ssl"))
    with pytest.raises(ValidationError):
        run_ssl_experiment(H, [0, 1], ExperimentConfig(task="ssl"))
    with pytest.raises(ValidationError):
        run_ssl_experiment(H, [0, 1, 1], ExperimentConfig(task="cut2"))


def test_cut_experiment_planted(tmp_path):
    path, _ = planted_dataset(tmp_path)
    H, labels, _ = ingest(DatasetSpec(path))
    records = run_cut_experiment(H, labels, ExperimentConfig(task="cut2", p=2.0))
    assert len(records) == 1
    rec = records[0]
    assert rec.error_rate == 0.0
    assert rec.ncut_value is not None and rec.ncut_value > 0
    assert rec.mu is None
    assert rec.labeled_fraction == 0.0


def test_cut_experiment_multiclass(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=80)
    H, labels, _ = ingest(DatasetSpec(path))
    records = run_cut_experiment(
        H, labels, ExperimentConfig(task="cutk", p=2.0, trials=2, seed=3)
    )
    assert len(records) == 2
    for rec in records:
        assert rec.task == "cutk"
        assert 0.0 <= rec.error_rate <= 0.5


def test_sweep_p_single_point(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=60)
    H, labels, _ = ingest(DatasetSpec(path))
    records = run_cut_experiment(H, labels, ExperimentConfig(task="sweep-p", p=(2.0,)))
    assert len(records) == 1
    multi = run_cut_experiment(
        H, labels, ExperimentConfig(task="sweep-p", p=(1.5, 2.0, 2.5))
    )
    assert [r.p for r in multi] == [1.5, 2.0, 2.5]


def test_emit_load_round_trip(tmp_path):
    path, _ = planted_dataset(tmp_path, n_rows=60)
    H, labels, _ = ingest(DatasetSpec(path))
    records = run_ssl_experiment(
        H, labels, ExperimentConfig(task="ssl", p=(1.5, 2.0), mu=10.0, trials=2)
    )
    records += run_cut_experiment(H, labels, ExperimentConfig(task="cut2", p=2.0))
    out = tmp_path / "records.csv"
    emit_csv(records, out)
    loaded = load_records(out)
    assert loaded == records


def test_emit_empty(tmp_path):
    out = tmp_path / "empty.csv"
    emit_csv([], out)
    assert out.read_text() == ",".join(CSV_COLUMNS) + "\n"
    assert load_records(out) == []


def test_load_records_errors(tmp_path):
    out = tmp_path / "bad.csv"
    out.write_text("dataset,task\nx,ssl\n")
    with pytest.raises(ParseError) as info:
        load_records(out)
    assert info.value.line == 1
    out.write_text(",".join(CSV_COLUMNS) + "\nonly,three,fields\n")
    with pytest.raises(ParseError) as info:
        load_records(out)
    assert info.value.line == 2
    out.write_text("")
    with pytest.raises(ParseError):
        load_records(out)


def rec(p, f, err, ncut=None, task="ssl"):
    return ResultRecord(
        dataset="d",
        task=task,
        p=p,
        mu=1.0,
        labeled_fraction=f,
        trial=0,
        seed=0,
        error_rate=err,
        ncut_value=ncut,
        iterations=0,
        wall_time=0.0,
    )


def test_summarize_ssl():
    records = [
        rec(2.0, 0.1, 0.3),
        rec(2.0, 0.1, 0.3),
        rec(2.5, 0.1, 0.3),
        rec(2.5, 0.1, 0.3),
        rec(2.0, 0.5, 0.2),
        rec(2.5, 0.5, 0.1),
    ]
    out = summarize_ssl(records)
    assert out["mean_error"][(2.0, 0.1)] == pytest.approx(0.3)
    assert out["mean_error"][(2.5, 0.1)] == pytest.approx(0.3)
    # exact tie keeps the smaller p; a strict winner takes over
    assert out["best_p"][0.1] == (2.0, pytest.approx(0.3))
    assert out["best_p"][0.5] == (2.5, pytest.approx(0.1))


def test_summarize_cut():
    records = [
        rec(2.0, 0.0, 0.2, ncut=0.5, task="cut2"),
        rec(2.0, 0.0, 0.4, ncut=0.7, task="cut2"),
        rec(2.5, 0.0, 0.1, ncut=0.4, task="cut2"),
    ]
    out = summarize_cut(records)
    assert out["mean_error"][2.0] == pytest.approx(0.3)
    assert out["mean_ncut"][2.0] == pytest.approx(0.6)
    assert out["argmin_p"] == (2.5, pytest.approx(0.1))
