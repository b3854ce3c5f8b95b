"""
Stateful layer objects wrapping the kernels in ``functional``.

A layer keeps the tape of its last forward pass; ``backward`` consumes it,
stores parameter gradients in ``grads`` (same order as ``params``) and
returns the gradient w.r.t. the layer input.
"""

from typing import List, Optional
import logging

import numpy as np

from quantum.qnode import QNodeConfig, QNodeTape, qnode_backward, qnode_forward
from . import functional as F

logger = logging.getLogger(__name__)


class Layer:
    name = "Layer"

    def __init__(self):
        self.params: List[np.ndarray] = []
        self.grads: List[np.ndarray] = []
        self._tape = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _take_tape(self):
        if self._tape is None:
            raise F.ShapeError(f"{self.name}.backward called without a preceding forward")
        tape, self._tape = self._tape, None
        return tape

    def __repr__(self) -> str:
        return f"{self.name}()"


def kaiming_uniform(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    """U(-b, b) with b = sqrt(6 / fan_in), the ReLU-gain fan-in bound"""
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Conv2d(Layer):
    name = "Conv2d"

    def __init__(self, in_ch: int, out_ch: int, kernel: int, stride: int = 1, padding: int = 0,
                 rng: Optional[np.random.Generator] = None):
        super().__init__()
        rng = rng or np.random.default_rng(0)
        self.stride = stride
        self.padding = padding
        weights = kaiming_uniform(rng, (out_ch, in_ch, kernel, kernel), in_ch * kernel * kernel)
        self.params = [weights, np.zeros(out_ch)]
        self.grads = [np.zeros_like(p) for p in self.params]

    def forward(self, x):
        out, self._tape = F.conv2d_forward(x, self.params[0], self.params[1], self.stride, self.padding)
        return out

    def backward(self, upstream):
        grad_input, grad_w, grad_b = F.conv2d_backward(self._take_tape(), upstream)
        self.grads = [grad_w, grad_b]
        return grad_input

    def __repr__(self):
        o, c, k, _ = self.params[0].shape
        return f"Conv2d({c}->{o}, k{k}, s{self.stride}, p{self.padding})"


class ReLU(Layer):
    name = "ReLU"

    def forward(self, x):
        out, self._tape = F.relu_forward(x)
        return out

    def backward(self, upstream):
        return F.relu_backward(self._take_tape(), upstream)


class MaxPool2d(Layer):
    name = "MaxPool2d"

    def __init__(self, kernel: int = 2, stride: int = 2):
        super().__init__()
        self.kernel = kernel
        self.stride = stride

    def forward(self, x):
        out, self._tape = F.maxpool_forward(x, self.kernel, self.stride)
        return out

    def backward(self, upstream):
        return F.maxpool_backward(self._take_tape(), upstream)


class Flatten(Layer):
    name = "Flatten"

    def forward(self, x):
        out, self._tape = F.flatten_forward(x)
        return out

    def backward(self, upstream):
        return F.flatten_backward(self._take_tape(), upstream)


class Linear(Layer):
    name = "Linear"

    def __init__(self, in_features: int, out_features: int, rng: Optional[np.random.Generator] = None):
        super().__init__()
        rng = rng or np.random.default_rng(0)
        weights = kaiming_uniform(rng, (out_features, in_features), in_features)
        self.params = [weights, np.zeros(out_features)]
        self.grads = [np.zeros_like(p) for p in self.params]

    def forward(self, x):
        out, self._tape = F.linear_forward(x, self.params[0], self.params[1])
        return out

    def backward(self, upstream):
        grad_input, grad_w, grad_b = F.linear_backward(self._take_tape(), upstream)
        self.grads = [grad_w, grad_b]
        return grad_input

    def __repr__(self):
        o, i = self.params[0].shape
        return f"Linear({i}->{o})"


class QuantumNode(Layer):
    """Applies the scalar quantum node to every row of an [N, 1] batch.

    Each call bumps ``calls`` so shot-mode evaluations of the same sample at
    different training steps draw from different, reproducible RNG streams.
    ``phase`` separates training passes (0) from evaluation passes (1).
    """

    name = "QuantumNode"

    def __init__(self, config: QNodeConfig):
        super().__init__()
        self.config = config
        self.calls = 0
        self.phase = 0

    def forward(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != 1:
            raise F.ShapeError(f"QuantumNode expects an [N, 1] input, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise F.ShapeError("QuantumNode received a non-finite angle")
        call = self.calls
        self.calls += 1
        outputs = np.empty_like(x)
        tapes: List[QNodeTape] = []
        for i, theta in enumerate(x[:, 0]):
            outputs[i, 0], tape = qnode_forward(theta, self.config, stream=(self.phase, call, i))
            tapes.append(tape)
        self._tape = tapes
        return outputs

    def backward(self, upstream):
        tapes = self._take_tape()
        g = np.asarray(upstream, dtype=np.float64)
        if g.shape != (len(tapes), 1):
            raise F.ShapeError(f"Upstream gradient shape {g.shape} does not match ({len(tapes)}, 1)")
        grad = np.empty_like(g)
        for i, tape in enumerate(tapes):
            grad[i, 0] = qnode_backward(tape, g[i, 0], self.config)
        return grad

    def __repr__(self):
        return f"QuantumNode(shots={self.config.shots}, shift={self.config.shift:.4f})"


class LogSoftmax(Layer):
    name = "LogSoftmax"

    def forward(self, x):
        out, self._tape = F.log_softmax_forward(x)
        return out

    def backward(self, upstream):
        return F.log_softmax_backward(self._take_tape(), upstream)
