"""
Re-evaluate a saved checkpoint on the validation split it was trained against.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union
import logging

from pydantic import ValidationError

from neural import Checkpoint, CheckpointError, ShapeError, evaluate_accuracy, load_checkpoint
from workflows.dataset import TaskDataset, split
from workflows.training import DataSource, TrainConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalResult:
    task: Tuple[str, str]
    variant: str
    accuracy: float
    val_size: int
    checkpoint_path: str


def _stored_settings(checkpoint_path: str, extra: dict) -> Tuple[TrainConfig, Optional[DataSource]]:
    try:
        config = TrainConfig.model_validate(extra["train_config"])
    except (KeyError, ValidationError) as e:
        raise CheckpointError(f"{checkpoint_path} carries no usable training settings: {e}") from e
    source = None
    if extra.get("data_source"):
        try:
            source = DataSource.model_validate(extra["data_source"])
        except ValidationError as e:
            logger.warning(f"Ignoring stored data source in {checkpoint_path}: {e}")
    return config, source


def stored_task(checkpoint: Checkpoint) -> Optional[Tuple[str, str]]:
    """The class pair a checkpoint was trained on, if recorded"""
    task = checkpoint.extra.get("task")
    if isinstance(task, (list, tuple)) and len(task) == 2:
        return task[0], task[1]
    return None


def evaluate_checkpoint(checkpoint: Union[str, Checkpoint], source: Optional[DataSource] = None,
                        dataset: Optional[TaskDataset] = None) -> EvalResult:
    """Validation accuracy of a checkpoint.

    The split is rebuilt from the seed, fraction and stratification stored in
    the checkpoint, so the same samples are held out as during training.
    ``checkpoint`` is a path or an already loaded Checkpoint; ``source``
    defaults to the data source recorded at training time.
    Raises ShapeError when the data does not match the model's input shape.
    """
    checkpoint_path = checkpoint if isinstance(checkpoint, str) else "<checkpoint>"
    if isinstance(checkpoint, str):
        checkpoint = load_checkpoint(checkpoint)
    model = checkpoint.model
    config, stored_source = _stored_settings(checkpoint_path, checkpoint.extra)

    if dataset is None:
        source = source or stored_source
        if source is None:
            raise CheckpointError(f"{checkpoint_path} records no data source; pass one explicitly")
        dataset = source.load()

    if tuple(dataset.image_shape) != model.input_shape:
        raise ShapeError(
            f"Checkpoint expects images shaped {list(model.input_shape)}, "
            f"dataset provides {list(dataset.image_shape)} (check --grayscale)"
        )

    view = split(dataset, config.split_fraction, config.seed, config.stratify)
    accuracy = evaluate_accuracy(model, dataset.images[view.val_indices], dataset.labels[view.val_indices],
                                 batch_size=config.batch_size)
    logger.info(f"{checkpoint_path}: {model.variant} on {dataset.class_a} vs {dataset.class_b} "
                f"val_acc={accuracy:.4f} ({len(view.val_indices)} samples)")
    return EvalResult(
        task=dataset.task,
        variant=model.variant,
        accuracy=accuracy,
        val_size=len(view.val_indices),
        checkpoint_path=checkpoint_path,
    )
