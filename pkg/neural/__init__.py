# From-scratch layers, loss, optimizer and the two model variants
from .functional import (
    ShapeError,
    conv2d_backward,
    conv2d_forward,
    flatten_backward,
    flatten_forward,
    linear_backward,
    linear_forward,
    log_softmax_backward,
    log_softmax_forward,
    log_softmax_nll,
    maxpool_backward,
    maxpool_forward,
    nll_loss,
    relu_backward,
    relu_forward,
)
from .spec import CLASSICAL_CNN, QNN4EO, VARIANTS, ModelSpec, ModelSpecError, infer_shapes, model_spec
from .model import Model, StepResult, build_model, evaluate_accuracy, model_forward_backward, predict
from .optim import AdamState, adam_step
from .checkpoint import Checkpoint, CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    'ShapeError',
    'conv2d_backward',
    'conv2d_forward',
    'flatten_backward',
    'flatten_forward',
    'linear_backward',
    'linear_forward',
    'log_softmax_backward',
    'log_softmax_forward',
    'log_softmax_nll',
    'maxpool_backward',
    'maxpool_forward',
    'nll_loss',
    'relu_backward',
    'relu_forward',
    'CLASSICAL_CNN',
    'QNN4EO',
    'VARIANTS',
    'ModelSpec',
    'ModelSpecError',
    'infer_shapes',
    'model_spec',
    'Model',
    'StepResult',
    'build_model',
    'evaluate_accuracy',
    'model_forward_backward',
    'predict',
    'AdamState',
    'adam_step',
    'Checkpoint',
    'CheckpointError',
    'load_checkpoint',
    'save_checkpoint',
]
