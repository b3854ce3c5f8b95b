"""
Validated settings and report schema for training runs.
"""

from typing import List, Literal, Optional, Tuple
import hashlib
import json

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from neural.spec import VARIANTS
from quantum.qnode import QNodeConfig
from utils.config import CODE_VERSION
from workflows.dataset import DEFAULT_SPLIT_FRACTION, IMAGE_SIZE, TaskDataset, load_class_pair, synthetic_task

REPORT_SCHEMA_VERSION = 1
MAX_SEED = 2 ** 64 - 1


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["classical-cnn", "qnn4eo"] = "qnn4eo"
    epochs: int = Field(default=20, ge=1)
    learning_rate: float = Field(default=1e-4, gt=0.0)
    batch_size: int = Field(default=32, ge=1)
    split_fraction: float = Field(default=DEFAULT_SPLIT_FRACTION, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    stratify: bool = False
    qnode: QNodeConfig = QNodeConfig()

    def with_variant(self, variant: str) -> "TrainConfig":
        if variant not in VARIANTS:
            raise ValueError(f"Unknown variant {variant!r}")
        return self.model_copy(update={"variant": variant})

    def with_seed(self, seed: int) -> "TrainConfig":
        """Copy with a new training seed; a qnode seed pinned apart from the training seed is kept"""
        update = {"seed": seed}
        if self.qnode.seed == self.seed:
            update["qnode"] = self.qnode.model_copy(update={"seed": seed})
        return self.model_copy(update=update)


class DataSource(BaseModel):
    """Where a task's images come from: a EuroSAT-style tree or the synthetic generator"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["eurosat", "synthetic"]
    class_a: str
    class_b: str
    root: Optional[str] = None
    n_per_class: Optional[int] = Field(default=None, ge=1)
    data_seed: int = Field(default=0, ge=0)
    grayscale: bool = False
    # synthetic images only; EuroSAT tiles are always 64x64
    image_size: int = Field(default=IMAGE_SIZE, ge=28)

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == "eurosat" and not self.root:
            raise ValueError("eurosat data source needs a root directory")
        if self.kind == "synthetic" and self.n_per_class is None:
            raise ValueError("synthetic data source needs n_per_class")
        if self.class_a == self.class_b:
            raise ValueError("class_a and class_b must differ")
        if self.kind == "eurosat" and self.image_size != IMAGE_SIZE:
            raise ValueError(f"eurosat images are {IMAGE_SIZE}x{IMAGE_SIZE}")
        return self

    @property
    def task(self) -> Tuple[str, str]:
        return self.class_a, self.class_b

    def for_task(self, class_a: str, class_b: str) -> "DataSource":
        return self.model_copy(update={"class_a": class_a, "class_b": class_b})

    def load(self, use_cache: bool = True, force_refresh: bool = False) -> TaskDataset:
        if self.kind == "synthetic":
            return synthetic_task(self.class_a, self.class_b, self.n_per_class, seed=self.data_seed,
                                  size=self.image_size, channels=1 if self.grayscale else 3)
        return load_class_pair(self.root, self.class_a, self.class_b, grayscale=self.grayscale,
                               use_cache=use_cache, force_refresh=force_refresh)


class RunReport(BaseModel):
    """Everything a training run emits except the checkpoint (schema version 1)"""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = REPORT_SCHEMA_VERSION
    task: Tuple[str, str]
    variant: Literal["classical-cnn", "qnn4eo"]
    epoch_losses: List[float]
    epoch_train_accuracy: List[float]
    val_accuracy: float = Field(ge=0.0, le=1.0)
    train_size: int = Field(ge=1)
    val_size: int = Field(ge=1)
    wall_time_seconds: float = Field(ge=0.0)
    config: TrainConfig
    data_source: DataSource
    fingerprint: str

    @model_validator(mode="after")
    def _check_epochs(self):
        if len(self.epoch_losses) != self.config.epochs or len(self.epoch_train_accuracy) != self.config.epochs:
            raise ValueError(f"Report records {len(self.epoch_losses)} epochs, config asks for {self.config.epochs}")
        return self

    def deterministic_view(self) -> dict:
        """The report without wall time, for reproducibility comparisons"""
        return self.model_dump(mode="json", exclude={"wall_time_seconds"})


def run_fingerprint(config: TrainConfig, source: DataSource, dataset: TaskDataset) -> str:
    """sha256 over code version, config, data source and the exact tensors trained on"""
    digest = hashlib.sha256()
    digest.update(CODE_VERSION.encode())
    digest.update(json.dumps(config.model_dump(mode="json"), sort_keys=True).encode())
    digest.update(json.dumps(source.model_dump(mode="json"), sort_keys=True).encode())
    digest.update(np.ascontiguousarray(dataset.images).tobytes())
    digest.update(np.ascontiguousarray(dataset.labels).tobytes())
    return digest.hexdigest()
