from src.harness.checkpoints import default_checkpoints
from src.harness.config import ExperimentConfig, load_config
from src.harness.engine import TrajectoryRecord, run_trajectory
from src.harness.ensemble import CheckpointStat, EnsembleSummary, run_ensemble
from src.harness.storage import SCHEMA_VERSION, load, persist

__all__ = [
    "default_checkpoints", "ExperimentConfig", "load_config", "TrajectoryRecord", "run_trajectory",
    "CheckpointStat", "EnsembleSummary", "run_ensemble", "SCHEMA_VERSION", "load", "persist",
]
