"""
Training Workflow CLI

This CLI trains one model variant on one binary land-use task:
1. Loads a class pair from a EuroSAT-style directory (or generates a synthetic pair)
2. Splits it into train/validation sets from the seed
3. Trains the classical CNN or the hybrid QNN4EO model with Adam on NLL loss
4. Writes report.json, checkpoint.npz and metadata.json to the run directory

The workflow is built from:
- workflows/dataset/: image loading, synthetic classes and splits
- workflows/training/trainer.py: training loop and run outputs
- neural/ and quantum/: the model layers and the quantum node

Usage:
    python train_workflow_cli.py --variant qnn4eo --synthetic 200 --epochs 5 --seed 7
    python train_workflow_cli.py --variant classical-cnn --data-root EuroSAT --classes Forest Industrial
"""

import os
import sys
import argparse

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from neural import VARIANTS
from utils import config
from utils.cli import (
    add_data_arguments,
    add_output_arguments,
    add_training_arguments,
    build_data_source,
    build_train_config,
    configure_logging,
    report_failure,
)
from workflows.training import REPORT_FILENAME, run_directory, run_training


def add_arguments(parser):
    parser.add_argument('--variant', type=str, choices=VARIANTS, default=None,
                        help='Model variant (default: qnn4eo)')
    add_training_arguments(parser)
    add_data_arguments(parser)
    add_output_arguments(parser)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description='Train one model variant on one class pair.')
    add_arguments(parser)
    return parser, parser.parse_args(argv)


def run(args, parser):
    configure_logging(args.debug)
    train_config = build_train_config(args, parser)
    source = build_data_source(args, parser)
    out_dir = args.out or config.OUT_DIR

    print(f"Training {train_config.variant} on {source.class_a} vs {source.class_b} "
          f"({source.kind}, {train_config.epochs} epochs, seed {train_config.seed})...")
    try:
        report = run_training(train_config, source, out_dir, force_refresh=args.force_refresh)
    except (ValueError, RuntimeError, OSError) as e:
        return report_failure(e)

    directory = run_directory(out_dir, source.task, train_config.variant, train_config.seed)
    print(f"Final loss: {report.epoch_losses[-1]:.4f}")
    print(f"Validation accuracy: {100.0 * report.val_accuracy:.2f}% ({report.val_size} samples)")
    print(f"Report saved to: {os.path.join(directory, REPORT_FILENAME)}")
    return 0


def main(argv=None):
    parser, args = parse_args(argv)
    return run(args, parser)


if __name__ == "__main__":
    sys.exit(main())
