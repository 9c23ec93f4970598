"""Tests for src.harness.storage: JSON and CSV summaries."""

import json
import math

import pytest

from src.harness.ensemble import CheckpointStat, EnsembleSummary, run_ensemble
from src.harness.storage import CSV_COLUMNS, SCHEMA_VERSION, load, persist, summary_to_dict, summary_from_dict
from src.utils.errors import SchemaError, SchemaVersionError, StorageError


@pytest.fixture
def summary(make_config):
    return run_ensemble(make_config(iterations=60, replicates=3, name="tiny"), threads=1)


def test_round_trip(tmp_path, summary):
    json_path, csv_path = persist(summary, tmp_path / "out" / "tiny")
    assert json_path.suffix == ".json" and json_path.exists()
    assert csv_path == json_path.with_suffix(".csv")

    loaded = load(json_path)
    assert [cp.k for cp in loaded.checkpoints] == [cp.k for cp in summary.checkpoints]
    assert [cp.mean_V for cp in loaded.checkpoints] == [cp.mean_V for cp in summary.checkpoints]
    assert loaded.config.to_dict() == summary.config.to_dict()
    assert loaded.wall_time_s == summary.wall_time_s


def test_csv_layout(tmp_path, summary):
    _, csv_path = persist(summary, tmp_path / "tiny.json")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == len(summary.checkpoints) + 1
    k, mean_v, _, n_alive = lines[-1].split(",")
    assert int(k) == summary.checkpoints[-1].k
    assert float(mean_v) == summary.checkpoints[-1].mean_V
    assert int(n_alive) == 3


def test_load_csv(tmp_path, summary):
    _, csv_path = persist(summary, tmp_path / "tiny.json")
    loaded = load(csv_path)
    assert loaded.config is None
    assert [cp.stderr_V for cp in loaded.checkpoints] == [cp.stderr_V for cp in summary.checkpoints]


def test_missing_checkpoint_column(summary):
    data = summary_to_dict(summary)
    del data["checkpoints"][0]["stderr_V"]
    with pytest.raises(SchemaError, match="stderr_V"):
        summary_from_dict(data)


def test_missing_csv_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("k,mean_V,n_alive\n0,1.0,1\n")
    with pytest.raises(SchemaError, match="stderr_V"):
        load(path)


def test_schema_version_checked_first(summary):
    data = summary_to_dict(summary)
    data["schema_version"] = SCHEMA_VERSION + 1
    del data["checkpoints"]
    with pytest.raises(SchemaVersionError):
        summary_from_dict(data)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(SchemaError):
        load(path)


def test_document_is_plain_json(summary):
    data = json.loads(json.dumps(summary_to_dict(summary)))
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["config"]["name"] == "tiny"


@pytest.mark.parametrize("name", ["absent.json", "absent.csv"])
def test_missing_file(tmp_path, name):
    with pytest.raises(StorageError, match="cannot read summary"):
        load(tmp_path / name)


def test_nan_moments_written_as_null(tmp_path):
    summary = EnsembleSummary(
        checkpoints=[
            CheckpointStat(k=0, mean_V=2.0, stderr_V=0.0, n_alive=1),
            CheckpointStat(k=5, mean_V=float("nan"), stderr_V=float("nan"), n_alive=0),
        ],
        version="v0",
    )
    json_path, _ = persist(summary, tmp_path / "gaps.json")
    text = json_path.read_text()
    assert "NaN" not in text
    rows = json.loads(text)["checkpoints"]
    assert rows[0]["mean_xhat_sq"] is None
    assert rows[1]["mean_V"] is None and rows[1]["stderr_V"] is None

    loaded = load(json_path)
    assert loaded.checkpoints[0].mean_V == 2.0
    assert math.isnan(loaded.checkpoints[0].mean_xhat_sq)
    assert math.isnan(loaded.checkpoints[1].mean_V)
    assert loaded.checkpoints[1].n_alive == 0
