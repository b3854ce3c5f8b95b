"""
Desk-scale synthetic stand-ins for EuroSAT classes.

Every class family has a distinct texture and a distinct mean intensity, so
any working trainer separates them quickly. Images of a class depend only on
(seed, class name, sample index): the same class looks the same in every
pair it appears in.
"""

from typing import Callable, Dict
import zlib

import numpy as np

from .eurosat_data import DatasetError, IMAGE_SIZE, TaskDataset

NOISE_STD = 0.02

SMOOTH_MEAN = 0.30
BLOCK_LOW = 0.35
BLOCK_HIGH = 0.95
STRIPE_LOW = 0.20
STRIPE_HIGH = 0.80
SPECKLE_BASE = 0.15
SPECKLE_DOT = 0.90
SPECKLE_DENSITY = 0.10


def _grid(size: int):
    coords = np.arange(size) / size
    return np.meshgrid(coords, coords, indexing="ij")


def smooth_texture(rng: np.random.Generator, size: int) -> np.ndarray:
    """Low-frequency sinusoidal field around SMOOTH_MEAN"""
    yy, xx = _grid(size)
    fy, fx = rng.uniform(0.5, 2.0, size=2)
    py, px = rng.uniform(0.0, 1.0, size=2)
    return SMOOTH_MEAN + 0.12 * np.sin(2 * np.pi * (fx * xx + px)) * np.cos(2 * np.pi * (fy * yy + py))


def block_pattern(rng: np.random.Generator, size: int) -> np.ndarray:
    """High-contrast checkerboard; half the cells are bright, so the mean is (LOW + HIGH) / 2"""
    block = int(rng.choice([8, 16]))
    flip = int(rng.integers(0, 2))
    rows = np.arange(size) // block
    cells = (rows[:, None] + rows[None, :] + flip) % 2
    return np.where(cells == 1, BLOCK_HIGH, BLOCK_LOW)


def stripe_pattern(rng: np.random.Generator, size: int) -> np.ndarray:
    period = int(rng.choice([4, 6]))
    lines = (np.arange(size) // (period // 2)) % 2
    pattern = np.where(lines == 1, STRIPE_HIGH, STRIPE_LOW)
    if rng.integers(0, 2):
        return np.tile(pattern[:, None], (1, size))
    return np.tile(pattern[None, :], (size, 1))


def speckle_pattern(rng: np.random.Generator, size: int) -> np.ndarray:
    dots = rng.random((size, size)) < SPECKLE_DENSITY
    return np.where(dots, SPECKLE_DOT, SPECKLE_BASE)


SYNTHETIC_CLASSES: Dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "blocks": block_pattern,
    "smooth": smooth_texture,
    "speckle": speckle_pattern,
    "stripes": stripe_pattern,
}


def synthetic_image(class_name: str, index: int, seed: int, size: int = IMAGE_SIZE, channels: int = 3) -> np.ndarray:
    if class_name not in SYNTHETIC_CLASSES:
        raise DatasetError(f"Unknown synthetic class {class_name!r}, choose from {sorted(SYNTHETIC_CLASSES)}")
    # crc32 keeps the per-class stream stable across processes (unlike hash())
    rng = np.random.default_rng([seed & 0xFFFFFFFF, zlib.crc32(class_name.encode()), index])
    base = SYNTHETIC_CLASSES[class_name](rng, size)
    tint = rng.uniform(-0.03, 0.03, size=(channels, 1, 1))
    noise = rng.normal(0.0, NOISE_STD, size=(channels, size, size))
    return np.clip(base[None, :, :] + tint + noise, 0.0, 1.0)


def synthetic_task(class_a: str, class_b: str, n_per_class: int, seed: int = 0,
                   size: int = IMAGE_SIZE, channels: int = 3) -> TaskDataset:
    """``n_per_class`` images of each synthetic class, class_a (label 0) first"""
    if n_per_class < 1:
        raise DatasetError(f"n_per_class must be >= 1, got {n_per_class}")
    if class_a == class_b:
        raise DatasetError(f"A task needs two distinct classes, got {class_a!r} twice")
    images = [synthetic_image(class_a, i, seed, size, channels) for i in range(n_per_class)]
    images += [synthetic_image(class_b, i, seed, size, channels) for i in range(n_per_class)]
    labels = np.repeat(np.array([0, 1], dtype=np.int64), n_per_class)
    source = {"kind": "synthetic", "n_per_class": n_per_class, "data_seed": seed, "channels": channels}
    return TaskDataset(class_a, class_b, np.stack(images), labels, source=source)


def synthetic_pair(n_per_class: int, seed: int = 0, size: int = IMAGE_SIZE, channels: int = 3) -> TaskDataset:
    """Smooth low-frequency textures (label 0) vs high-contrast blocks (label 1)"""
    return synthetic_task("smooth", "blocks", n_per_class, seed, size, channels)
