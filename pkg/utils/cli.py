"""
Argument groups and settings assembly shared by the workflow CLIs.

Training flags default to None so that only flags the user actually passed
override the config file, which in turn overrides the model defaults.
"""

import logging
import sys

from pydantic import ValidationError

from utils import config
from utils.config import ConfigFileError, load_config_file, merge_settings
from workflows.dataset import IMAGE_SIZE, SYNTHETIC_CLASSES
from workflows.training import DataSource, TrainConfig

DEFAULT_SYNTHETIC_PAIR = ('smooth', 'blocks')
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(debug=False):
    level = logging.DEBUG if debug else getattr(logging, config.LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def add_training_arguments(parser):
    group = parser.add_argument_group('training')
    group.add_argument('--config', type=str, default=None,
                       help='YAML or JSON file with training settings (CLI flags win)')
    group.add_argument('--epochs', type=int, default=None, help='Training epochs (default: 20)')
    group.add_argument('--lr', '--learning-rate', dest='learning_rate', type=float, default=None,
                       help='Adam learning rate (default: 0.0001)')
    group.add_argument('--batch-size', type=int, default=None, help='Mini-batch size (default: 32)')
    group.add_argument('--split-fraction', type=float, default=None,
                       help='Validation fraction (default: 0.2)')
    group.add_argument('--seed', type=int, default=None,
                       help='Seed for the split, initial weights, shuffling and shot sampling (default: 0)')
    group.add_argument('--stratify', action='store_true', default=None,
                       help='Keep the class ratio in the validation split')
    group.add_argument('--shots', type=int, default=None,
                       help='Measurement shots for the quantum node; 0 means exact (default: 0)')
    group.add_argument('--shift', type=float, default=None,
                       help='Angle shift of the gradient rule, in (0, pi] (default: pi/2)')


def add_data_arguments(parser, classes_nargs=2):
    group = parser.add_argument_group('data')
    group.add_argument('--data-root', type=str, default=None,
                       help='EuroSAT-style directory with one folder per class (default: $QNN4EO_DATA_ROOT)')
    group.add_argument('--classes', type=str, nargs=classes_nargs, default=None, metavar='CLASS',
                       help='Class names to use')
    group.add_argument('--synthetic', type=int, default=None, metavar='N',
                       help='Use N generated images per class instead of a data root')
    group.add_argument('--data-seed', type=int, default=None, help='Seed of the synthetic generator (default: 0)')
    group.add_argument('--image-size', type=int, default=None,
                       help=f'Synthetic image size, at least 28 (default: {IMAGE_SIZE})')
    group.add_argument('--grayscale', action='store_true', default=None,
                       help='Convert images to a single luminance channel')
    group.add_argument('--force-refresh', action='store_true', default=False,
                       help='Ignore cached image tensors')


def add_output_arguments(parser):
    parser.add_argument('--out', type=str, default=None,
                        help=f'Directory for reports and checkpoints (default: {config.OUT_DIR})')
    parser.add_argument('--debug', action='store_true', help='Enable debug logging')


def build_train_config(args, parser, variant=None):
    """Defaults < --config file < explicit flags; invalid values are usage errors"""
    try:
        file_settings = load_config_file(args.config)
    except ConfigFileError as e:
        parser.error(str(e))
    cli_settings = {
        'variant': variant or getattr(args, 'variant', None),
        'epochs': args.epochs,
        'learning_rate': args.learning_rate,
        'batch_size': args.batch_size,
        'split_fraction': args.split_fraction,
        'seed': args.seed,
        'stratify': args.stratify,
        'qnode': {'shots': args.shots, 'shift': args.shift},
    }
    if not isinstance(file_settings.get('qnode', {}), dict):
        parser.error("'qnode' in the config file must be a mapping")
    settings = merge_settings(file_settings, cli_settings)
    qnode = settings.setdefault('qnode', {})
    # shot sampling follows the training seed unless the file pins it
    qnode.setdefault('seed', settings.get('seed', 0))
    try:
        return TrainConfig.model_validate(settings)
    except ValidationError as e:
        parser.error(_validation_message(e))


def build_data_source(args, parser, class_a=None, class_b=None):
    """DataSource for one task from the data flags"""
    if args.synthetic is not None:
        if class_a is None:
            class_a, class_b = args.classes or DEFAULT_SYNTHETIC_PAIR
        settings = {
            'kind': 'synthetic',
            'n_per_class': args.synthetic,
            'data_seed': args.data_seed,
            'image_size': args.image_size,
        }
    else:
        root = args.data_root or config.DATA_ROOT
        if not root:
            parser.error('Pass --data-root (or set QNN4EO_DATA_ROOT) or use --synthetic N')
        if args.image_size is not None and args.image_size != IMAGE_SIZE:
            parser.error('--image-size only applies to --synthetic data')
        if class_a is None:
            if not args.classes:
                parser.error('--classes CLASS_A CLASS_B is required with --data-root')
            class_a, class_b = args.classes
        settings = {'kind': 'eurosat', 'root': root}
    settings.update({'class_a': class_a, 'class_b': class_b, 'grayscale': args.grayscale})
    try:
        return DataSource.model_validate({k: v for k, v in settings.items() if v is not None})
    except ValidationError as e:
        parser.error(_validation_message(e))


def synthetic_class_names():
    return sorted(SYNTHETIC_CLASSES)


def _validation_message(error):
    parts = []
    for item in error.errors():
        location = '.'.join(str(p) for p in item['loc']) or 'settings'
        parts.append(f"{location}: {item['msg']}")
    return 'invalid settings: ' + '; '.join(parts)


def report_failure(error):
    """One-line diagnostic on stderr; returns the runtime-failure exit code"""
    print(f"Error: {error}", file=sys.stderr)
    return 1
