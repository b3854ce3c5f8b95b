"""
Checkpoint container.

A checkpoint is an uncompressed NumPy ``.npz`` archive read with
``allow_pickle=False``:

    header       0-d unicode array holding a JSON document:
                   {"format": "qnn4eo-checkpoint", "format_version": 1,
                    "spec": <ModelSpec as JSON>, "seed": <int>,
                    "param_count": <number of arrays>, "extra": {...}}
    param_000 .. float64 parameter arrays in Model.parameters() order
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List
import json
import logging
import os
import tempfile
import zipfile

import numpy as np
from pydantic import ValidationError

from .model import Model, build_model
from .spec import ModelSpec

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "qnn4eo-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass
class Checkpoint:
    model: Model
    extra: Dict[str, Any] = field(default_factory=dict)


def save_checkpoint(path: str, model: Model, extra: Dict[str, Any] = None) -> str:
    """Write ``model`` (spec, seed, parameters) plus ``extra`` JSON metadata atomically"""
    header = {
        "format": CHECKPOINT_FORMAT,
        "format_version": CHECKPOINT_VERSION,
        "spec": model.spec.model_dump(mode="json"),
        "seed": int(model.seed),
        "param_count": len(model.parameters()),
        "extra": extra or {},
    }
    arrays = {f"param_{i:03d}": p for i, p in enumerate(model.parameters())}
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".npz.tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            np.savez(f, header=np.array(json.dumps(header, sort_keys=True)), **arrays)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    logger.info(f"Checkpoint saved to {path}")
    return path


def load_checkpoint(path: str) -> Checkpoint:
    if not os.path.exists(path):
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            header = json.loads(str(archive["header"]))
            if header.get("format") != CHECKPOINT_FORMAT:
                raise CheckpointError(f"{path} is not a model checkpoint")
            if header.get("format_version") != CHECKPOINT_VERSION:
                raise CheckpointError(
                    f"Unsupported checkpoint version {header.get('format_version')} (expected {CHECKPOINT_VERSION})"
                )
            arrays = [archive[f"param_{i:03d}"] for i in range(int(header["param_count"]))]
        spec = ModelSpec.model_validate(header["spec"])
        model = build_model(spec, int(header["seed"]))
        model.load_parameters(arrays)
    except CheckpointError:
        raise
    except (KeyError, ValueError, OSError, zipfile.BadZipFile, ValidationError, json.JSONDecodeError) as e:
        raise CheckpointError(f"Corrupt checkpoint {path}: {e}") from e
    return Checkpoint(model=model, extra=header.get("extra", {}))
