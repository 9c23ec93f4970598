"""
Summary files.

``<name>.json`` holds the schema version, the config echo, every checkpoint
and the run metadata; ``<name>.csv`` next to it holds the plotting columns
``k,mean_V,stderr_V,n_alive`` with floats at 17 significant digits.
"""
import csv
import json
import math
from pathlib import Path
from typing import List, Optional, Tuple

from src.harness.config import ExperimentConfig
from src.harness.ensemble import CheckpointStat, EnsembleSummary
from src.utils.errors import ConfigurationError, SchemaError, SchemaVersionError, StorageError
from src.utils.log import get_logger

logger = get_logger("Storage")

SCHEMA_VERSION = 1
CSV_COLUMNS = ("k", "mean_V", "stderr_V", "n_alive")
CHECKPOINT_FIELDS = ("k", "mean_V", "stderr_V", "n_alive", "mean_xhat_sq", "mean_yhat_sq")
TOP_LEVEL_FIELDS = ("schema_version", "config", "checkpoints", "wall_time_s")


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _json_float(value: float) -> Optional[float]:
    """NaN and infinities are written as null."""
    return value if math.isfinite(value) else None


def _read_float(value) -> float:
    return float("nan") if value is None else float(value)


def summary_to_dict(summary: EnsembleSummary) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": summary.version,
        "config": None if summary.config is None else summary.config.to_dict(),
        "checkpoints": [
            {
                "k": cp.k,
                "mean_V": _json_float(cp.mean_V),
                "stderr_V": _json_float(cp.stderr_V),
                "n_alive": cp.n_alive,
                "mean_xhat_sq": _json_float(cp.mean_xhat_sq),
                "mean_yhat_sq": _json_float(cp.mean_yhat_sq),
            }
            for cp in summary.checkpoints
        ],
        "wall_time_s": summary.wall_time_s,
    }


def write_csv(summary: EnsembleSummary, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for cp in summary.checkpoints:
            writer.writerow([cp.k, _fmt(cp.mean_V), _fmt(cp.stderr_V), cp.n_alive])
    return path


def persist(summary: EnsembleSummary, path) -> Tuple[Path, Path]:
    """Write ``path`` (JSON) and its companion CSV; returns both paths."""
    path = Path(path)
    if path.suffix != ".json":
        path = path.with_suffix(".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary_to_dict(summary), indent=2, allow_nan=False) + "\n")
    csv_path = write_csv(summary, path.with_suffix(".csv"))
    logger.info(f"wrote {path} and {csv_path}")
    return path, csv_path


def _require(mapping: dict, names, where: str) -> None:
    for name in names:
        if name not in mapping:
            raise SchemaError(f"{where} is missing column {name!r}")


def summary_from_dict(data: dict) -> EnsembleSummary:
    if not isinstance(data, dict):
        raise SchemaError("summary document is not a JSON object")
    _require(data, ("schema_version",), "summary")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"summary has schema version {data['schema_version']}, this build reads version {SCHEMA_VERSION}"
        )
    _require(data, TOP_LEVEL_FIELDS, "summary")
    checkpoints = []
    for row in data["checkpoints"]:
        _require(row, CHECKPOINT_FIELDS, "checkpoint")
        checkpoints.append(CheckpointStat(
            k=int(row["k"]),
            mean_V=_read_float(row["mean_V"]),
            stderr_V=_read_float(row["stderr_V"]),
            n_alive=int(row["n_alive"]),
            mean_xhat_sq=_read_float(row["mean_xhat_sq"]),
            mean_yhat_sq=_read_float(row["mean_yhat_sq"]),
        ))
    try:
        config = None if data["config"] is None else ExperimentConfig.from_dict(data["config"])
    except ConfigurationError as exc:
        raise SchemaError(f"summary config does not parse: {exc}") from exc
    return EnsembleSummary(
        checkpoints=checkpoints,
        config=config,
        wall_time_s=float(data["wall_time_s"]),
        version=str(data.get("version", "")),
    )


def load(path) -> EnsembleSummary:
    """Read a summary JSON, or a bare summary CSV (checkpoints only)."""
    path = Path(path)
    if path.suffix == ".csv":
        return EnsembleSummary(checkpoints=load_csv(path), version="")
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise StorageError(f"cannot read summary {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return summary_from_dict(data)


def load_csv(path) -> List[CheckpointStat]:
    try:
        fh = Path(path).open(newline="")
    except OSError as exc:
        raise StorageError(f"cannot read summary {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in CSV_COLUMNS:
            if column not in header:
                raise SchemaError(f"{path} is missing column {column!r}")
        return [
            CheckpointStat(
                k=int(row["k"]),
                mean_V=float(row["mean_V"]),
                stderr_V=float(row["stderr_V"]),
                n_alive=int(row["n_alive"]),
            )
            for row in reader
        ]
