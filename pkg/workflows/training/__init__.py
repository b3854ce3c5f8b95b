from .train_config import REPORT_SCHEMA_VERSION, DataSource, RunReport, TrainConfig, run_fingerprint
from .trainer import (
    CHECKPOINT_FILENAME,
    REPORT_FILENAME,
    TrainingError,
    load_valid_report,
    run_directory,
    run_training,
    train_task,
)

__all__ = [
    'REPORT_SCHEMA_VERSION',
    'DataSource',
    'RunReport',
    'TrainConfig',
    'run_fingerprint',
    'CHECKPOINT_FILENAME',
    'REPORT_FILENAME',
    'TrainingError',
    'load_valid_report',
    'run_directory',
    'run_training',
    'train_task',
]
