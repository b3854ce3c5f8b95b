from .eurosat_data import (
    DatasetError,
    EuroSATLoader,
    IMAGE_SIZE,
    TaskDataset,
    discover_classes,
    list_class_images,
    load_class_pair,
    read_image,
)
from .splits import DEFAULT_SPLIT_FRACTION, SplitError, SplitView, split, task_matrix
from .synthetic_data import SYNTHETIC_CLASSES, synthetic_image, synthetic_pair, synthetic_task

__all__ = [
    'DatasetError',
    'EuroSATLoader',
    'IMAGE_SIZE',
    'TaskDataset',
    'discover_classes',
    'list_class_images',
    'load_class_pair',
    'read_image',
    'DEFAULT_SPLIT_FRACTION',
    'SplitError',
    'SplitView',
    'split',
    'task_matrix',
    'SYNTHETIC_CLASSES',
    'synthetic_image',
    'synthetic_pair',
    'synthetic_task',
]
