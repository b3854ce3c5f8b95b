from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from .eurosat_data import DatasetError, TaskDataset, discover_classes

logger = logging.getLogger(__name__)

DEFAULT_SPLIT_FRACTION = 0.2


class SplitError(DatasetError):
    pass


@dataclass(frozen=True)
class SplitView:
    train_indices: np.ndarray
    val_indices: np.ndarray

    @property
    def sizes(self) -> Tuple[int, int]:
        return len(self.train_indices), len(self.val_indices)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split(dataset: TaskDataset, fraction: float = DEFAULT_SPLIT_FRACTION, seed: Optional[int] = None,
          stratify: bool = False) -> SplitView:
    """Deterministic train/validation split.

    The dataset is shuffled with a generator seeded by ``seed`` (the
    dataset's ``split_seed`` when omitted); the first
    round(fraction * total) shuffled indices form the validation set. With
    ``stratify`` the same validation total is shared between the two labels
    in proportion to their counts.
    """
    if not 0.0 < fraction < 1.0:
        raise SplitError(f"Split fraction must lie in (0, 1), got {fraction}")
    total = len(dataset)
    n_val = _round_half_up(fraction * total)
    if n_val == 0 or n_val == total:
        raise SplitError(f"Split of {total} samples at fraction {fraction} leaves an empty side")

    rng = np.random.default_rng(dataset.split_seed if seed is None else seed)
    if not stratify:
        perm = rng.permutation(total)
        return SplitView(train_indices=perm[n_val:], val_indices=perm[:n_val])

    by_label = [np.flatnonzero(dataset.labels == label) for label in (0, 1)]
    val_a = min(len(by_label[0]), _round_half_up(n_val * len(by_label[0]) / total))
    quotas = [val_a, n_val - val_a]
    train_parts, val_parts = [], []
    for indices, quota in zip(by_label, quotas):
        if quota > len(indices):
            raise SplitError("Stratified split cannot satisfy the validation quota")
        shuffled = rng.permutation(indices)
        val_parts.append(shuffled[:quota])
        train_parts.append(shuffled[quota:])
    # interleave the classes again so batches are mixed
    train = rng.permutation(np.concatenate(train_parts))
    val = rng.permutation(np.concatenate(val_parts))
    return SplitView(train_indices=train, val_indices=val)


def task_matrix(root: Optional[str] = None, class_names: Optional[Sequence[str]] = None) -> List[Tuple[str, str]]:
    """All unordered class pairs, lexicographically ordered.

    Class names come from ``class_names`` when given, otherwise from the
    sub-directories of ``root``.
    """
    if class_names is None:
        if root is None:
            raise DatasetError("task_matrix needs a data root or an explicit class list")
        class_names = discover_classes(root)
    names = sorted(set(class_names))
    if len(names) < 2:
        raise DatasetError(f"At least two classes are needed to form a task, got {names}")
    return list(combinations(names, 2))
