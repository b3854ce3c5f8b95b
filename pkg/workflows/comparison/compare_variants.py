"""
Train both model variants on every class pair and tabulate their validation accuracy.

For each task the classical CNN and the hybrid model share the data split
and the initialization seed, so the quantum node is the only difference
between the two runs.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd
from tqdm import tqdm

from neural import CLASSICAL_CNN, QNN4EO, VARIANTS
from workflows.dataset import DatasetError
from workflows.training import DataSource, TrainConfig, load_valid_report, run_directory, run_training

logger = logging.getLogger(__name__)

COMPARISON_SCHEMA_VERSION = 1
TABLE_COLUMNS = ['pair', 'class_a', 'class_b', 'cnn_acc', 'qnn_acc', 'delta', 'cnn_std', 'qnn_std', 'runs', 'error']


@dataclass(frozen=True)
class TaskJob:
    """Everything one worker needs to run both variants on a task"""
    source: DataSource
    base_config: TrainConfig
    seeds: Tuple[int, ...]
    out_dir: str
    force: bool = False
    force_refresh: bool = False


@dataclass
class TaskOutcome:
    task: Tuple[str, str]
    accuracies: Dict[str, List[float]] = field(default_factory=dict)
    resumed: int = 0
    error: Optional[str] = None


def run_task(job: TaskJob) -> TaskOutcome:
    """Both variants for every seed on one task; failures are recorded, never raised"""
    outcome = TaskOutcome(task=job.source.task, accuracies={variant: [] for variant in VARIANTS})
    dataset = None
    try:
        for seed in job.seeds:
            for variant in VARIANTS:
                config = job.base_config.with_seed(seed).with_variant(variant)
                if not job.force:
                    directory = run_directory(job.out_dir, job.source.task, variant, seed)
                    report = load_valid_report(directory, config, job.source)
                    if report is not None:
                        logger.info(f"Skipping {variant} on {job.source.task} (seed {seed}): finished run found")
                        outcome.accuracies[variant].append(report.val_accuracy)
                        outcome.resumed += 1
                        continue
                if dataset is None:
                    dataset = job.source.load(force_refresh=job.force_refresh)
                report = run_training(config, job.source, job.out_dir, dataset=dataset)
                outcome.accuracies[variant].append(report.val_accuracy)
    except (ValueError, RuntimeError, OSError) as e:
        # DatasetError, TrainingError, ShapeError and QuantumError all land here
        outcome.error = f"{type(e).__name__}: {e}"
        logger.error(f"Task {job.source.class_a} vs {job.source.class_b} failed: {outcome.error}")
    return outcome


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if values else float('nan')


def _std(values: Sequence[float]) -> float:
    return float(np.std(values)) if len(values) > 1 else 0.0 if values else float('nan')


def build_table(outcomes: Sequence[TaskOutcome]) -> pd.DataFrame:
    """One row per task, ordered lexicographically by (class_a, class_b)"""
    rows = []
    for outcome in sorted(outcomes, key=lambda o: o.task):
        cnn = outcome.accuracies.get(CLASSICAL_CNN, [])
        qnn = outcome.accuracies.get(QNN4EO, [])
        # a task only counts when both variants finished every repeat
        complete = bool(outcome.error is None and cnn and qnn and len(cnn) == len(qnn))
        cnn_acc = _mean(cnn) if complete else float('nan')
        qnn_acc = _mean(qnn) if complete else float('nan')
        rows.append({
            'pair': f"{outcome.task[0]} vs {outcome.task[1]}",
            'class_a': outcome.task[0],
            'class_b': outcome.task[1],
            'cnn_acc': cnn_acc,
            'qnn_acc': qnn_acc,
            'delta': qnn_acc - cnn_acc,
            'cnn_std': _std(cnn) if complete else float('nan'),
            'qnn_std': _std(qnn) if complete else float('nan'),
            'runs': len(cnn) if complete else 0,
            'error': outcome.error or ('' if complete else 'incomplete'),
        })
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def table_averages(table: pd.DataFrame) -> Dict[str, float]:
    """Mean accuracies over the tasks that succeeded"""
    ok = table[table['error'] == '']
    if ok.empty:
        return {'cnn_avg': float('nan'), 'qnn_avg': float('nan'), 'delta_avg': float('nan'), 'tasks': 0}
    return {
        'cnn_avg': float(ok['cnn_acc'].mean()),
        'qnn_avg': float(ok['qnn_acc'].mean()),
        'delta_avg': float(ok['delta'].mean()),
        'tasks': int(len(ok)),
    }


@dataclass
class ComparisonResult:
    table: pd.DataFrame
    averages: Dict[str, float]
    outcomes: List[TaskOutcome]

    @property
    def failed_tasks(self) -> List[Tuple[str, str]]:
        return [o.task for o in self.outcomes if o.error is not None]

    def to_json_dict(self) -> dict:
        records = self.table.astype(object).where(self.table.notna(), None).to_dict(orient='records')
        averages = {k: (None if isinstance(v, float) and np.isnan(v) else v) for k, v in self.averages.items()}
        return {'schema_version': COMPARISON_SCHEMA_VERSION, 'rows': records, 'averages': averages}


def compare_variants(
    tasks: Sequence[Tuple[str, str]],
    base_config: TrainConfig,
    base_source: DataSource,
    out_dir: str,
    repeats: int = 1,
    force: bool = False,
    force_refresh: bool = False,
    workers: int = 1,
    progress: bool = True,
) -> ComparisonResult:
    """Run both variants on every task.

    Args:
        tasks: (class_a, class_b) pairs, e.g. from ``task_matrix``
        base_config: Shared training settings; its variant is ignored
        base_source: Data source template, re-targeted at each task
        out_dir: Root of the run directories
        repeats: Seeds base_config.seed .. base_config.seed + repeats - 1
        force: Retrain even when a finished run with the same settings exists
        workers: Number of worker processes; tasks are independent

    Returns:
        ComparisonResult with the lexicographically ordered table
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if not tasks:
        raise DatasetError("No tasks to compare")
    seeds = tuple(base_config.seed + i for i in range(repeats))
    jobs = [
        TaskJob(source=base_source.for_task(a, b), base_config=base_config, seeds=seeds,
                out_dir=out_dir, force=force, force_refresh=force_refresh)
        for a, b in sorted(tasks)
    ]
    logger.info(f"Comparing variants on {len(jobs)} tasks x {repeats} seed(s) with {workers} worker(s)")

    if workers <= 1:
        outcomes = [run_task(job) for job in tqdm(jobs, desc="tasks", unit="task", disable=not progress)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(tqdm(pool.map(run_task, jobs), total=len(jobs), desc="tasks", unit="task",
                                 disable=not progress))

    table = build_table(outcomes)
    return ComparisonResult(table=table, averages=table_averages(table), outcomes=outcomes)
