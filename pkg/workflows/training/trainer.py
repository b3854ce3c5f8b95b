import os
import math
import time
import logging
from typing import Optional, Tuple

import numpy as np
from pydantic import ValidationError

from neural import (
    AdamState,
    Model,
    adam_step,
    build_model,
    evaluate_accuracy,
    model_forward_backward,
    model_spec,
    save_checkpoint,
)
from workflows.dataset import TaskDataset, split
from workflows.metadata_generator import (
    STATUS_FAILED,
    STATUS_FINISHED,
    generate_metadata,
    load_metadata,
    save_metadata,
    write_json_atomic,
)
from .train_config import DataSource, RunReport, TrainConfig, run_fingerprint

logger = logging.getLogger(__name__)

REPORT_FILENAME = "report.json"
CHECKPOINT_FILENAME = "checkpoint.npz"


class TrainingError(RuntimeError):
    pass


def run_directory(out_dir: str, task: Tuple[str, str], variant: str, seed: int) -> str:
    """Deterministic location of a run, so reruns find earlier results"""
    return os.path.join(out_dir, f"{task[0]}__{task[1]}", f"{variant}_seed{seed}")


def train_task(config: TrainConfig, dataset: TaskDataset, source: DataSource) -> Tuple[RunReport, Model]:
    """Train one variant on one binary task and measure validation accuracy.

    The split, the initial weights and the per-epoch shuffles are all
    derived from ``config.seed``; nothing else is random.
    """
    start_time = time.time()
    view = split(dataset, config.split_fraction, config.seed, config.stratify)
    channels, height, width = dataset.image_shape
    if height != width:
        raise TrainingError(f"Square images expected, got {height}x{width}")

    spec = model_spec(config.variant, config.qnode, in_channels=channels, image_size=height)
    model = build_model(spec, config.seed)
    state = AdamState.for_params(model.parameters(), learning_rate=config.learning_rate)
    logger.info(f"Training {config.variant} on {dataset.class_a} vs {dataset.class_b}: "
                f"{len(view.train_indices)} train / {len(view.val_indices)} val, {model.parameter_count()} parameters")

    epoch_losses, epoch_accuracy = [], []
    for epoch in range(config.epochs):
        order = np.random.default_rng([config.seed, epoch]).permutation(view.train_indices)
        loss_sum, correct_sum = 0.0, 0.0
        for batch_no, first in enumerate(range(0, len(order), config.batch_size)):
            idx = order[first:first + config.batch_size]
            result = model_forward_backward(model, dataset.images[idx], dataset.labels[idx])
            if not math.isfinite(result.loss):
                raise TrainingError(
                    f"Non-finite loss {result.loss} at epoch {epoch + 1}, batch {batch_no + 1} "
                    f"({config.variant}, lr={config.learning_rate}); try a smaller learning rate"
                )
            adam_step(model.parameters(), result.gradients, state)
            loss_sum += result.loss * len(idx)
            correct_sum += result.accuracy * len(idx)
        epoch_losses.append(loss_sum / len(order))
        epoch_accuracy.append(correct_sum / len(order))
        logger.info(f"[{config.variant}] epoch {epoch + 1}/{config.epochs} "
                    f"loss={epoch_losses[-1]:.4f} train_acc={epoch_accuracy[-1]:.4f}")

    val_accuracy = evaluate_accuracy(model, dataset.images[view.val_indices], dataset.labels[view.val_indices],
                                     batch_size=config.batch_size)
    report = RunReport(
        task=dataset.task,
        variant=config.variant,
        epoch_losses=epoch_losses,
        epoch_train_accuracy=epoch_accuracy,
        val_accuracy=val_accuracy,
        train_size=len(view.train_indices),
        val_size=len(view.val_indices),
        wall_time_seconds=time.time() - start_time,
        config=config,
        data_source=source,
        fingerprint=run_fingerprint(config, source, dataset),
    )
    logger.info(f"[{config.variant}] {dataset.class_a} vs {dataset.class_b}: val_acc={val_accuracy:.4f}")
    return report, model


def load_valid_report(directory: str, config: Optional[TrainConfig] = None,
                      source: Optional[DataSource] = None) -> Optional[RunReport]:
    """A finished run's report, or None if it is missing, invalid or was made with other settings"""
    metadata = load_metadata(directory)
    if not metadata or metadata.get("status") != STATUS_FINISHED:
        return None
    report_path = os.path.join(directory, REPORT_FILENAME)
    if not os.path.exists(report_path) or not os.path.exists(os.path.join(directory, CHECKPOINT_FILENAME)):
        return None
    try:
        with open(report_path, "r", encoding="utf-8") as f:
            report = RunReport.model_validate_json(f.read())
    except (OSError, ValidationError) as e:
        logger.warning(f"Ignoring invalid report {report_path}: {e}")
        return None
    if config is not None and report.config != config:
        return None
    if source is not None and report.data_source != source:
        return None
    return report


def run_training(config: TrainConfig, source: DataSource, out_dir: str, dataset: Optional[TaskDataset] = None,
                 force_refresh: bool = False) -> RunReport:
    """Train, then write report.json, checkpoint.npz and metadata.json under the run directory"""
    directory = run_directory(out_dir, source.task, config.variant, config.seed)
    metadata = generate_metadata(
        report_type="train",
        task=source.task,
        variant=config.variant,
        seed=config.seed,
        data_source=source.model_dump(mode="json"),
        directory_name=os.path.relpath(directory, out_dir),
    )
    save_metadata(metadata, directory)

    try:
        if dataset is None:
            dataset = source.load(force_refresh=force_refresh)
        report, model = train_task(config, dataset, source)
        save_checkpoint(
            os.path.join(directory, CHECKPOINT_FILENAME),
            model,
            extra={
                "task": list(source.task),
                "train_config": config.model_dump(mode="json"),
                "data_source": source.model_dump(mode="json"),
                "val_accuracy": report.val_accuracy,
            },
        )
        write_json_atomic(report.model_dump(mode="json"), os.path.join(directory, REPORT_FILENAME))
    except Exception as e:
        metadata["status"] = STATUS_FAILED
        metadata["error"] = str(e)
        save_metadata(metadata, directory)
        raise

    metadata["status"] = STATUS_FINISHED
    metadata["val_accuracy"] = report.val_accuracy
    save_metadata(metadata, directory)
    return report
