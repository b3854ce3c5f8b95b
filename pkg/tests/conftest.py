import os

import numpy as np
import pytest
from PIL import Image


def numerical_gradient(f, x, eps=1e-6, indices=None):
    """Central-difference gradient of scalar ``f()`` w.r.t. array ``x`` (perturbed in place).

    Only the flat ``indices`` are perturbed when given; other entries stay 0.
    """
    grad = np.zeros_like(x, dtype=np.float64)
    flat_x = x.reshape(-1)
    flat_g = grad.reshape(-1)
    for i in (range(flat_x.size) if indices is None else indices):
        original = flat_x[i]
        flat_x[i] = original + eps
        plus = f()
        flat_x[i] = original - eps
        minus = f()
        flat_x[i] = original
        flat_g[i] = (plus - minus) / (2.0 * eps)
    return grad


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep tensor caches out of the working tree"""
    cache_root = tmp_path / "cache"
    monkeypatch.setattr("workflows.base_fetcher.CACHE_DIR", str(cache_root))
    return cache_root


def write_class_tree(root, counts, size=64, seed=0):
    """root/<class>/img_XXX.png with a per-class brightness so classes are separable"""
    rng = np.random.default_rng(seed)
    for class_no, (name, count) in enumerate(sorted(counts.items())):
        class_dir = os.path.join(root, name)
        os.makedirs(class_dir, exist_ok=True)
        base = 40 + 60 * class_no
        for i in range(count):
            pixels = np.clip(base + rng.integers(0, 30, size=(size, size, 3)), 0, 255).astype(np.uint8)
            Image.fromarray(pixels).save(os.path.join(class_dir, f"img_{i:03d}.png"))
    return str(root)


@pytest.fixture
def eurosat_root(tmp_path):
    """Three tiny classes in EuroSAT layout"""
    return write_class_tree(tmp_path / "eurosat", {"Forest": 6, "Industrial": 5, "River": 4})
