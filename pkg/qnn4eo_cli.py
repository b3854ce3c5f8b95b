"""
Single entry point with train, eval and compare subcommands.

Each subcommand takes the same flags as its workflow CLI:
    python qnn4eo_cli.py train --variant qnn4eo --synthetic 200 --epochs 5 --seed 7
    python qnn4eo_cli.py eval public/results/smooth__blocks/qnn4eo_seed7/checkpoint.npz
    python qnn4eo_cli.py compare --synthetic 100 --classes smooth blocks stripes
"""

import os
import sys
import argparse

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import comparison_workflow_cli
import eval_workflow_cli
import train_workflow_cli

COMMANDS = {
    'train': (train_workflow_cli, 'Train one model variant on one class pair'),
    'eval': (eval_workflow_cli, 'Evaluate a checkpoint on its validation split'),
    'compare': (comparison_workflow_cli, 'Compare both variants on every class pair'),
}


def build_parser():
    parser = argparse.ArgumentParser(description='Hybrid quantum-classical land-use classification.')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (module, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        module.add_arguments(sub)
        sub.set_defaults(runner=module.run, subparser=sub)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    # usage errors are reported against the subcommand's own parser
    return args.runner(args, args.subparser)


if __name__ == "__main__":
    sys.exit(main())
