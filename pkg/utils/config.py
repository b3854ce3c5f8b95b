import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

CODE_VERSION = "0.3.0"

# Output locations
OUT_DIR = os.getenv('QNN4EO_OUT_DIR', os.path.join('public', 'results'))
CACHE_DIR = os.getenv('QNN4EO_CACHE_DIR', os.path.join('public', 'cache'))

# EuroSAT RGB root (one directory per class); optional, the CLIs also take --data-root
DATA_ROOT = os.getenv('QNN4EO_DATA_ROOT')

LOG_LEVEL = os.getenv('QNN4EO_LOG_LEVEL', 'INFO').upper()

try:
    DEFAULT_WORKERS = max(1, int(os.getenv('QNN4EO_WORKERS', '1')))
except ValueError:
    print("Warning: QNN4EO_WORKERS is not an integer. Falling back to 1 worker.")
    DEFAULT_WORKERS = 1


class ConfigFileError(ValueError):
    pass


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Read a YAML or JSON mapping of TrainConfig fields.

    Returns an empty dict when ``path`` is None.
    """
    if not path:
        return {}
    if not os.path.exists(path):
        raise ConfigFileError(f"Config file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            # JSON is a subset of YAML, one parser covers both
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigFileError(f"Could not parse {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigFileError(f"{path} must contain a mapping, got {type(data).__name__}")
    return data


def merge_settings(*layers: Dict[str, Any]) -> Dict[str, Any]:
    """Merge setting dicts left to right; later layers win, None values are skipped.

    Nested dicts (e.g. ``qnode``) are merged key by key.
    """
    merged: Dict[str, Any] = {}
    for layer in layers:
        for key, value in (layer or {}).items():
            if value is None:
                continue
            if isinstance(value, dict):
                base = merged.get(key)
                merged[key] = merge_settings(base if isinstance(base, dict) else {}, value)
            else:
                merged[key] = value
    return merged
