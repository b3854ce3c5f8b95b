"""
EuroSAT-style class-per-directory ingestion.

The layout is ``root/<ClassName>/*.{jpg,jpeg,png}`` with 64x64 RGB tiles
(the standard EuroSAT RGB distribution). Pixel values are scaled from
[0, 255] to [0, 1]; images are returned channel-first.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import hashlib
import logging
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..base_fetcher import BaseFetcher

logger = logging.getLogger(__name__)

IMAGE_SIZE = 64
IMAGE_EXTENSIONS = ('.jpg', '.jpeg', '.png')
CACHE_VERSION = 1


class DatasetError(ValueError):
    pass


@dataclass
class TaskDataset:
    """A labeled binary task: label 0 is ``class_a``, label 1 is ``class_b``.

    ``images`` is float64 [N, C, 64, 64] in [0, 1]; ``labels`` is int64 [N].
    """

    class_a: str
    class_b: str
    images: np.ndarray
    labels: np.ndarray
    split_seed: int = 0
    source: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.images.ndim != 4 or self.images.shape[0] != self.labels.shape[0]:
            raise DatasetError(f"Images {self.images.shape} and labels {self.labels.shape} disagree")
        if self.images.size and (self.images.min() < 0.0 or self.images.max() > 1.0):
            raise DatasetError("Image values must lie in [0, 1]")
        present = set(np.unique(self.labels).tolist())
        if present != {0, 1}:
            raise DatasetError(f"Both labels must be present, found {sorted(present)}")

    def __len__(self) -> int:
        return self.labels.shape[0]

    @property
    def task(self) -> Tuple[str, str]:
        return self.class_a, self.class_b

    @property
    def image_shape(self) -> Tuple[int, int, int]:
        return tuple(self.images.shape[1:])

    def class_counts(self) -> Dict[str, int]:
        return {self.class_a: int((self.labels == 0).sum()), self.class_b: int((self.labels == 1).sum())}


def list_class_images(root: str, class_name: str) -> List[str]:
    """Image paths of one class, sorted lexicographically by filename"""
    class_dir = os.path.join(root, class_name)
    if not os.path.isdir(class_dir):
        raise DatasetError(f"Missing class directory: {class_dir}")
    names = sorted(n for n in os.listdir(class_dir) if n.lower().endswith(IMAGE_EXTENSIONS))
    if not names:
        raise DatasetError(f"No images found in {class_dir}")
    return [os.path.join(class_dir, n) for n in names]


def discover_classes(root: str) -> List[str]:
    if not os.path.isdir(root):
        raise DatasetError(f"Data root does not exist: {root}")
    return sorted(d for d in os.listdir(root) if os.path.isdir(os.path.join(root, d)) and not d.startswith('.'))


def read_image(path: str, grayscale: bool = False) -> np.ndarray:
    """Decode one tile to a [C, 64, 64] float64 array in [0, 1]"""
    try:
        with Image.open(path) as img:
            if img.size != (IMAGE_SIZE, IMAGE_SIZE):
                raise DatasetError(
                    f"{path}: expected {IMAGE_SIZE}x{IMAGE_SIZE} image, got {img.size[0]}x{img.size[1]}"
                )
            img = img.convert('L' if grayscale else 'RGB')
            pixels = np.asarray(img, dtype=np.float64) / 255.0
    except (UnidentifiedImageError, OSError) as e:
        raise DatasetError(f"{path}: unreadable image ({e})") from e
    if grayscale:
        return pixels[None, :, :]
    return np.ascontiguousarray(pixels.transpose(2, 0, 1))


def _listing_digest(paths: Sequence[str]) -> str:
    digest = hashlib.sha256()
    for path in paths:
        stat = os.stat(path)
        digest.update(f"{os.path.basename(path)}|{stat.st_size}|{stat.st_mtime_ns}\n".encode())
    return digest.hexdigest()[:16]


class EuroSATLoader(BaseFetcher):
    """Loads class pairs from a EuroSAT-style directory tree, caching decoded tensors"""

    def __init__(self, root: str, force_refresh: bool = False, use_cache: bool = True,
                 workers: int = 4, cache_root: Optional[str] = None):
        super().__init__(force_refresh, cache_subdir='eurosat', cache_root=cache_root)
        self.root = root
        self.use_cache = use_cache
        self.workers = max(1, workers)

    def _cache_key(self, class_a: str, class_b: str, grayscale: bool, paths: Sequence[str]) -> str:
        root_hash = hashlib.sha256(os.path.abspath(self.root).encode()).hexdigest()[:12]
        mode = 'L' if grayscale else 'RGB'
        return f"v{CACHE_VERSION}_{root_hash}_{_listing_digest(paths)}_{class_a}_{class_b}_{mode}"

    def load_pair(self, class_a: str, class_b: str, grayscale: bool = False, split_seed: int = 0) -> TaskDataset:
        """Load two classes as a binary task (class_a -> 0, class_b -> 1)"""
        if class_a == class_b:
            raise DatasetError(f"A task needs two distinct classes, got {class_a!r} twice")
        paths_a = list_class_images(self.root, class_a)
        paths_b = list_class_images(self.root, class_b)
        paths = paths_a + paths_b
        labels = np.array([0] * len(paths_a) + [1] * len(paths_b), dtype=np.int64)
        source = {"kind": "eurosat", "root": os.path.abspath(self.root), "grayscale": grayscale}

        key = self._cache_key(class_a, class_b, grayscale, paths)
        cached = self._load_from_cache(key) if self.use_cache else None
        if cached is not None:
            return TaskDataset(class_a, class_b, cached['images'], cached['labels'], split_seed, source)

        # map() keeps input order regardless of which file finishes first
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            images = list(pool.map(lambda p: read_image(p, grayscale), paths))
        stacked = np.stack(images)
        logger.info(f"Loaded {len(paths_a)} '{class_a}' and {len(paths_b)} '{class_b}' images from {self.root}")

        if self.use_cache:
            self._save_to_cache(key, {'images': stacked, 'labels': labels})
        return TaskDataset(class_a, class_b, stacked, labels, split_seed, source)


def load_class_pair(root: str, class_a: str, class_b: str, grayscale: bool = False,
                    split_seed: int = 0, use_cache: bool = False, force_refresh: bool = False) -> TaskDataset:
    """Load ``class_a`` (label 0) and ``class_b`` (label 1) from ``root``.

    Files are ordered lexicographically within each class, class_a first.
    Raises DatasetError for a missing class directory or for any unreadable
    or non-64x64 image, naming the file.
    """
    loader = EuroSATLoader(root, force_refresh=force_refresh, use_cache=use_cache)
    return loader.load_pair(class_a, class_b, grayscale=grayscale, split_seed=split_seed)
