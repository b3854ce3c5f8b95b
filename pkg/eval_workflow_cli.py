"""
Evaluation Workflow CLI

Re-computes the validation accuracy of a saved checkpoint. The validation
split is rebuilt from the seed stored in the checkpoint; without data flags
the data source recorded at training time is reused.

Usage:
    python eval_workflow_cli.py public/results/smooth__blocks/qnn4eo_seed7/checkpoint.npz
    python eval_workflow_cli.py CHECKPOINT --data-root EuroSAT --classes Forest Industrial
"""

import os
import sys
import argparse

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from utils.cli import add_data_arguments, build_data_source, configure_logging, report_failure
from neural import CheckpointError, load_checkpoint
from workflows.evaluation import evaluate_checkpoint, stored_task

DATA_FLAGS = ('data_root', 'classes', 'synthetic', 'data_seed', 'image_size', 'grayscale')


def add_arguments(parser):
    parser.add_argument('checkpoint', type=str, help='Path to a checkpoint.npz written by training')
    add_data_arguments(parser)
    parser.add_argument('--debug', action='store_true', help='Enable debug logging')


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description='Evaluate a checkpoint on its validation split.')
    add_arguments(parser)
    return parser, parser.parse_args(argv)


def run(args, parser):
    configure_logging(args.debug)
    try:
        checkpoint = load_checkpoint(args.checkpoint)
    except CheckpointError as e:
        return report_failure(e)

    source = None
    if any(getattr(args, flag) is not None for flag in DATA_FLAGS):
        # without --classes, evaluate on the pair the checkpoint was trained on
        task = tuple(args.classes) if args.classes else stored_task(checkpoint)
        if task is None:
            parser.error("--classes is required: the checkpoint records no class pair")
        source = build_data_source(args, parser, *task)

    try:
        result = evaluate_checkpoint(checkpoint, source=source)
    except (ValueError, RuntimeError, OSError) as e:
        return report_failure(e)

    print(f"{result.variant} on {result.task[0]} vs {result.task[1]}: "
          f"validation accuracy {100.0 * result.accuracy:.2f}% ({result.val_size} samples)")
    return 0


def main(argv=None):
    parser, args = parse_args(argv)
    return run(args, parser)


if __name__ == "__main__":
    sys.exit(main())
