"""
Variant Comparison Workflow CLI

This CLI orchestrates the CNN vs QNN4EO comparison workflow which:
1. Enumerates every unordered pair of the selected classes
2. Trains both variants on each pair with identical split and initialization seeds
3. Tabulates validation accuracies (pair, cnn_acc, qnn_acc, delta) and their averages
4. Writes comparison.csv, comparison.json and an HTML report

The workflow is designed to provide the comparison through:
- workflows/comparison/compare_variants.py: Task grid, resume and worker pool
- workflows/comparison/comparison_report.py: Table outputs and report generation
- workflows/training/trainer.py: Individual training runs (shared)

Finished runs with matching settings are reused unless --force is given.

Usage:
    python comparison_workflow_cli.py --synthetic 100 --classes smooth blocks stripes --epochs 5
    python comparison_workflow_cli.py --data-root EuroSAT [--classes Forest Industrial River] [--workers 4]
"""

import os
import sys
import argparse

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from utils import config
from utils.cli import (
    add_data_arguments,
    add_output_arguments,
    add_training_arguments,
    build_data_source,
    build_train_config,
    configure_logging,
    report_failure,
    synthetic_class_names,
)
from workflows.comparison import HARD_PAIR_THRESHOLD, compare_variants, summary_lines, write_comparison_outputs
from workflows.dataset import DatasetError, task_matrix
from workflows.metadata_generator import STATUS_FAILED, STATUS_FINISHED, generate_metadata, save_metadata


def add_arguments(parser):
    add_training_arguments(parser)
    add_data_arguments(parser, classes_nargs='+')
    parser.add_argument('--repeats', type=int, default=1,
                        help='Train each variant with seeds seed .. seed+k-1 and report the mean (default: 1)')
    parser.add_argument('--workers', type=int, default=config.DEFAULT_WORKERS,
                        help='Tasks trained in parallel processes (default: $QNN4EO_WORKERS or 1)')
    parser.add_argument('--force', action='store_true',
                        help='Retrain tasks that already have a finished run')
    parser.add_argument('--threshold', type=float, default=HARD_PAIR_THRESHOLD,
                        help='CNN accuracy below which a pair is reported as hard (default: 0.90)')
    add_output_arguments(parser)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description='Compare the classical CNN and QNN4EO on every class pair.')
    add_arguments(parser)
    return parser, parser.parse_args(argv)


def run(args, parser):
    configure_logging(args.debug)
    if args.repeats < 1:
        parser.error('--repeats must be at least 1')
    if args.workers < 1:
        parser.error('--workers must be at least 1')

    base_config = build_train_config(args, parser)
    if args.synthetic is not None:
        class_names = args.classes or synthetic_class_names()
        root = None
    else:
        root = args.data_root or config.DATA_ROOT
        class_names = args.classes
    try:
        tasks = task_matrix(root=root, class_names=class_names)
    except DatasetError as e:
        parser.error(str(e))
    base_source = build_data_source(args, parser, *tasks[0])

    out_dir = args.out or config.OUT_DIR
    comparison_dir = os.path.join(out_dir, f"comparison_{base_source.kind}")
    metadata = generate_metadata(
        report_type="comparison",
        tasks_compared=[list(t) for t in tasks],
        directory_name=os.path.basename(comparison_dir),
        additional_data={"repeats": args.repeats, "base_config": base_config.model_dump(mode="json")},
    )
    save_metadata(metadata, comparison_dir)

    print(f"Comparing classical-cnn and qnn4eo on {len(tasks)} task(s) "
          f"({base_config.epochs} epochs, {args.repeats} seed(s) from {base_config.seed})...")
    try:
        result = compare_variants(
            tasks,
            base_config,
            base_source,
            out_dir,
            repeats=args.repeats,
            force=args.force,
            force_refresh=args.force_refresh,
            workers=args.workers,
        )
        paths = write_comparison_outputs(result, comparison_dir, threshold=args.threshold)
    except (ValueError, RuntimeError, OSError) as e:
        metadata["status"] = STATUS_FAILED
        save_metadata(metadata, comparison_dir)
        return report_failure(e)

    print()
    for line in summary_lines(result.table, result.averages):
        print(line)
    print(f"\nComparison table saved to: {paths['csv']}")
    print(f"HTML report saved to: {paths['html']}")

    failed = result.failed_tasks
    metadata["status"] = STATUS_FAILED if failed else STATUS_FINISHED
    metadata["averages"] = result.to_json_dict()["averages"]
    save_metadata(metadata, comparison_dir)
    if failed:
        print(f"{len(failed)} task(s) failed: {', '.join(f'{a} vs {b}' for a, b in failed)}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    parser, args = parse_args(argv)
    return run(args, parser)


if __name__ == "__main__":
    sys.exit(main())
