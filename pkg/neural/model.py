"""
Sequential models built from a ModelSpec, plus the end-to-end
forward/backward step used by training.
"""

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, List, Tuple
import logging

import numpy as np

from .functional import ShapeError, nll_loss
from .layers import Conv2d, Flatten, Layer, Linear, LogSoftmax, MaxPool2d, QuantumNode, ReLU
from .spec import ModelSpec, ModelSpecError, infer_shapes

logger = logging.getLogger(__name__)


class Model:
    def __init__(self, spec: ModelSpec, layers: List[Layer], seed: int):
        self.spec = spec
        self.layers = layers
        self.seed = seed
        self.shapes = infer_shapes(spec)

    @property
    def variant(self) -> str:
        return self.spec.variant

    @property
    def input_shape(self) -> Tuple[int, int, int]:
        return tuple(self.spec.input_shape)

    def parameters(self) -> List[np.ndarray]:
        """All trainable arrays in layer order (weights before bias)"""
        return [p for layer in self.layers for p in layer.params]

    def gradients(self) -> List[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def load_parameters(self, arrays: List[np.ndarray]) -> None:
        params = self.parameters()
        if len(arrays) != len(params):
            raise ModelSpecError(f"Expected {len(params)} parameter arrays, got {len(arrays)}")
        for i, (p, a) in enumerate(zip(params, arrays)):
            a = np.asarray(a, dtype=np.float64)
            if p.shape != a.shape:
                raise ModelSpecError(f"Parameter {i}: expected shape {p.shape}, got {a.shape}")
            p[...] = a

    def quantum_nodes(self) -> List[QuantumNode]:
        return [layer for layer in self.layers if isinstance(layer, QuantumNode)]

    def check_input(self, images: np.ndarray) -> None:
        if images.ndim != 4 or tuple(images.shape[1:]) != self.input_shape:
            raise ShapeError(
                f"Model expects images shaped [N, {', '.join(map(str, self.input_shape))}], got {list(images.shape)}"
            )

    def forward(self, images) -> np.ndarray:
        """Log-probabilities [N, 2]"""
        x = np.asarray(images, dtype=np.float64)
        self.check_input(x)
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        g = upstream
        for layer in reversed(self.layers):
            g = layer.backward(g)
        return g

    @contextmanager
    def evaluation(self) -> Iterator["Model"]:
        """Run forward passes on the evaluation RNG streams of every quantum node"""
        nodes = self.quantum_nodes()
        saved = [(node.phase, node.calls) for node in nodes]
        for node in nodes:
            node.phase, node.calls = 1, 0
        try:
            yield self
        finally:
            for node, (phase, calls) in zip(nodes, saved):
                node.phase, node.calls = phase, calls

    def __repr__(self) -> str:
        return f"Model({self.variant}, {self.parameter_count()} params: {' -> '.join(map(repr, self.layers))})"


def build_model(spec: ModelSpec, seed: int) -> Model:
    """Instantiate ``spec`` with deterministic initial weights.

    Conv/linear weights are Kaiming-uniform (fan-in), biases are zero. Layers
    draw from one generator in order, so two variants that share a prefix of
    layers also share its initial weights.
    """
    infer_shapes(spec)
    rng = np.random.default_rng(seed)
    layers: List[Layer] = []
    for layer_spec in spec.layers:
        kind = layer_spec.kind
        if kind == "Conv2d":
            layers.append(Conv2d(layer_spec.in_ch, layer_spec.out_ch, layer_spec.kernel,
                                 layer_spec.stride, layer_spec.padding, rng=rng))
        elif kind == "ReLU":
            layers.append(ReLU())
        elif kind == "MaxPool2d":
            layers.append(MaxPool2d(layer_spec.kernel, layer_spec.stride))
        elif kind == "Flatten":
            layers.append(Flatten())
        elif kind == "Linear":
            layers.append(Linear(layer_spec.in_features, layer_spec.out_features, rng=rng))
        elif kind == "QuantumNode":
            layers.append(QuantumNode(layer_spec.qnode))
        elif kind == "LogSoftmax":
            layers.append(LogSoftmax())
        else:
            raise ModelSpecError(f"Unsupported layer kind {kind!r}")
    model = Model(spec, layers, seed)
    logger.debug("Built %r", model)
    return model


@dataclass
class StepResult:
    loss: float
    accuracy: float
    gradients: List[np.ndarray]


def model_forward_backward(model: Model, batch, labels) -> StepResult:
    """Loss, batch accuracy and gradients for every parameter.

    Gradients are returned as copies in ``model.parameters()`` order.
    """
    labels = np.asarray(labels)
    log_probs = model.forward(batch)
    loss, grad = nll_loss(log_probs, labels)
    model.backward(grad)
    accuracy = float(np.mean(log_probs.argmax(axis=1) == labels))
    return StepResult(loss=loss, accuracy=accuracy, gradients=[g.copy() for g in model.gradients()])


def predict(model: Model, images, batch_size: int = 64) -> np.ndarray:
    """Predicted class per image, evaluated in fixed-size chunks"""
    images = np.asarray(images, dtype=np.float64)
    model.check_input(images)
    preds = []
    with model.evaluation():
        for start in range(0, images.shape[0], batch_size):
            log_probs = model.forward(images[start:start + batch_size])
            preds.append(log_probs.argmax(axis=1))
    if not preds:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(preds)


def evaluate_accuracy(model: Model, images, labels, batch_size: int = 64) -> float:
    labels = np.asarray(labels)
    if labels.shape[0] == 0:
        raise ShapeError("Cannot evaluate accuracy on an empty set")
    return float(np.mean(predict(model, images, batch_size) == labels))
