"""
Utility module for generating standardized metadata for training runs and comparisons.
"""

import os
import json
import tempfile
from datetime import datetime

STATUS_UNFINISHED = "unfinished"
STATUS_FINISHED = "finished"
STATUS_FAILED = "failed"


def generate_metadata(
    report_type,
    task=None,
    variant=None,
    seed=None,
    data_source=None,
    tasks_compared=None,
    directory_name=None,
    status=STATUS_UNFINISHED,
    additional_data=None
):
    """
    Generate standardized metadata for run directories.

    Parameters:
    -----------
    report_type : str
        The type of report ('train', 'comparison')
    task : tuple, optional
        (class_a, class_b) for training runs
    variant : str, optional
        Model variant for training runs
    seed : int, optional
        Seed of the run
    data_source : dict, optional
        Where the images came from (EuroSAT root or synthetic generator settings)
    tasks_compared : list, optional
        List of task names (for comparison reports)
    directory_name : str, optional
        The directory name where the run is stored
    status : str
        'unfinished', 'finished' or 'failed'
    additional_data : dict, optional
        Any additional data to include in the metadata

    Returns:
    --------
    dict
        Standardized metadata dictionary
    """
    metadata = {
        "type": report_type,
        "status": status,
        "created": datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    }

    if report_type == "train":
        metadata["task"] = list(task) if task else None
        metadata["variant"] = variant
        metadata["seed"] = seed
        if data_source:
            metadata["data_source"] = data_source
    elif report_type == "comparison":
        if tasks_compared:
            metadata["tasks_compared"] = tasks_compared

    if directory_name:
        metadata["path"] = directory_name

    if additional_data and isinstance(additional_data, dict):
        metadata.update(additional_data)

    return metadata


def save_metadata(metadata, directory):
    """
    Save metadata to metadata.json in the specified directory (atomically).

    Returns:
    --------
    str
        Path to the saved metadata file
    """
    os.makedirs(directory, exist_ok=True)
    metadata_path = os.path.join(directory, "metadata.json")
    write_json_atomic(metadata, metadata_path)
    return metadata_path


def load_metadata(directory):
    """Read metadata.json from ``directory``; None if missing or unreadable"""
    metadata_path = os.path.join(directory, "metadata.json")
    if not os.path.exists(metadata_path):
        return None
    try:
        with open(metadata_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError):
        return None


def write_text_atomic(text, path):
    """Write ``text`` to a temp file in the target directory, then rename over ``path``"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    suffix = os.path.splitext(path)[1] + ".tmp"
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return path


def write_json_atomic(data, path):
    return write_text_atomic(json.dumps(data, indent=4, sort_keys=True), path)
