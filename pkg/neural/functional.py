"""
Forward/backward kernels for the classical layers.

Each ``*_forward`` returns ``(output, tape)``; the matching ``*_backward``
takes that tape plus the upstream gradient. Everything is float64 NumPy,
N x C x H x W for images.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class ShapeError(ValueError):
    pass


def _as_f64(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def conv_output_size(size: int, kernel: int, stride: int, padding: int) -> int:
    """Spatial output size of a convolution; the window must tile exactly"""
    span = size + 2 * padding - kernel
    if span < 0 or span % stride:
        raise ShapeError(
            f"Convolution does not fit: size={size}, kernel={kernel}, stride={stride}, padding={padding}"
        )
    return span // stride + 1


def pool_output_size(size: int, kernel: int, stride: int) -> int:
    """Spatial output size of a max pool; trailing rows that do not fill a window are dropped"""
    if size < kernel:
        raise ShapeError(f"Pool window {kernel} larger than input size {size}")
    return (size - kernel) // stride + 1


# --- convolution -----------------------------------------------------------

@dataclass
class ConvTape:
    padded_input: np.ndarray
    weights: np.ndarray
    stride: int
    padding: int
    input_shape: Tuple[int, ...]


def _windows(padded: np.ndarray, k_h: int, k_w: int, stride: int) -> np.ndarray:
    # (N, C, H', W', kH, kW) read-only view, no copy
    return sliding_window_view(padded, (k_h, k_w), axis=(2, 3))[:, :, ::stride, ::stride]


def conv2d_forward(x, weights, bias, stride: int = 1, padding: int = 0) -> Tuple[np.ndarray, ConvTape]:
    """Cross-correlation of ``x`` [N,C,H,W] with ``weights`` [O,C,kH,kW] plus ``bias`` [O]"""
    x, weights, bias = _as_f64(x), _as_f64(weights), _as_f64(bias)
    if x.ndim != 4 or weights.ndim != 4 or bias.ndim != 1:
        raise ShapeError(f"conv2d expects 4-D input/weights and 1-D bias, got {x.shape}, {weights.shape}, {bias.shape}")
    n, c, h, w = x.shape
    o, c_w, k_h, k_w = weights.shape
    if c != c_w:
        raise ShapeError(f"Input has {c} channels but weights expect {c_w}")
    if bias.shape[0] != o:
        raise ShapeError(f"Bias length {bias.shape[0]} does not match {o} output channels")
    if stride < 1 or padding < 0:
        raise ShapeError(f"Invalid stride {stride} / padding {padding}")
    out_h = conv_output_size(h, k_h, stride, padding)
    out_w = conv_output_size(w, k_w, stride, padding)

    padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x
    windows = _windows(padded, k_h, k_w, stride)
    assert windows.shape[2:4] == (out_h, out_w)
    out = np.einsum("nchwij,ocij->nohw", windows, weights, optimize=True)
    out += bias[None, :, None, None]
    return out, ConvTape(padded, weights, stride, padding, x.shape)


def conv2d_backward(tape: ConvTape, upstream) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (grad_input, grad_weights, grad_bias)"""
    g = _as_f64(upstream)
    weights, stride, pad = tape.weights, tape.stride, tape.padding
    k_h, k_w = weights.shape[2:]
    windows = _windows(tape.padded_input, k_h, k_w, stride)
    expected = (windows.shape[0], weights.shape[0], windows.shape[2], windows.shape[3])
    if g.shape != expected:
        raise ShapeError(f"Upstream gradient shape {g.shape} does not match conv output {expected}")

    grad_w = np.einsum("nohw,nchwij->ocij", g, windows, optimize=True)
    grad_b = g.sum(axis=(0, 2, 3))

    out_h, out_w = g.shape[2:]
    grad_padded = np.zeros_like(tape.padded_input)
    for i in range(k_h):
        for j in range(k_w):
            grad_padded[:, :, i:i + stride * out_h:stride, j:j + stride * out_w:stride] += np.einsum(
                "nohw,oc->nchw", g, weights[:, :, i, j], optimize=True
            )
    if pad:
        h, w = tape.input_shape[2:]
        grad_padded = grad_padded[:, :, pad:pad + h, pad:pad + w]
    return grad_padded, grad_w, grad_b


# --- activations, pooling, reshaping ---------------------------------------

def relu_forward(x) -> Tuple[np.ndarray, np.ndarray]:
    x = _as_f64(x)
    mask = x > 0
    return np.where(mask, x, 0.0), mask


def relu_backward(mask: np.ndarray, upstream) -> np.ndarray:
    g = _as_f64(upstream)
    if g.shape != mask.shape:
        raise ShapeError(f"Upstream gradient shape {g.shape} does not match {mask.shape}")
    return np.where(mask, g, 0.0)


@dataclass
class PoolTape:
    input_shape: Tuple[int, ...]
    argmax: np.ndarray
    kernel: int
    stride: int


def maxpool_forward(x, kernel: int = 2, stride: int = 2) -> Tuple[np.ndarray, PoolTape]:
    """Max over kernel x kernel windows; ties go to the first element in row-major window order"""
    x = _as_f64(x)
    if x.ndim != 4:
        raise ShapeError(f"maxpool expects a 4-D input, got {x.shape}")
    n, c, h, w = x.shape
    out_h = pool_output_size(h, kernel, stride)
    out_w = pool_output_size(w, kernel, stride)
    windows = sliding_window_view(x, (kernel, kernel), axis=(2, 3))[:, :, ::stride, ::stride][:, :, :out_h, :out_w]
    flat = windows.reshape(n, c, out_h, out_w, kernel * kernel)
    argmax = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, argmax[..., None], axis=-1)[..., 0]
    return out, PoolTape(x.shape, argmax, kernel, stride)


def maxpool_backward(tape: PoolTape, upstream) -> np.ndarray:
    g = _as_f64(upstream)
    if g.shape != tape.argmax.shape:
        raise ShapeError(f"Upstream gradient shape {g.shape} does not match pool output {tape.argmax.shape}")
    n, c, out_h, out_w = g.shape
    rows = np.arange(out_h)[:, None] * tape.stride + tape.argmax // tape.kernel
    cols = np.arange(out_w)[None, :] * tape.stride + tape.argmax % tape.kernel
    nn, cc = np.meshgrid(np.arange(n), np.arange(c), indexing="ij")
    grad = np.zeros(tape.input_shape, dtype=np.float64)
    # add.at accumulates correctly when windows overlap (stride < kernel)
    np.add.at(grad, (nn[:, :, None, None], cc[:, :, None, None], rows, cols), g)
    return grad


def flatten_forward(x) -> Tuple[np.ndarray, Tuple[int, ...]]:
    x = _as_f64(x)
    return x.reshape(x.shape[0], -1), x.shape


def flatten_backward(input_shape: Tuple[int, ...], upstream) -> np.ndarray:
    g = _as_f64(upstream)
    if g.size != int(np.prod(input_shape)):
        raise ShapeError(f"Cannot reshape gradient {g.shape} to {input_shape}")
    return g.reshape(input_shape)


# --- dense -----------------------------------------------------------------

@dataclass
class LinearTape:
    x: np.ndarray
    weights: np.ndarray


def linear_forward(x, weights, bias) -> Tuple[np.ndarray, LinearTape]:
    """Affine map x W^T + b with W shaped [out, in]"""
    x, weights, bias = _as_f64(x), _as_f64(weights), _as_f64(bias)
    if x.ndim != 2 or weights.ndim != 2 or x.shape[1] != weights.shape[1] or bias.shape != (weights.shape[0],):
        raise ShapeError(f"linear: incompatible shapes x={x.shape}, W={weights.shape}, b={bias.shape}")
    return x @ weights.T + bias, LinearTape(x, weights)


def linear_backward(tape: LinearTape, upstream) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    g = _as_f64(upstream)
    if g.shape != (tape.x.shape[0], tape.weights.shape[0]):
        raise ShapeError(f"Upstream gradient shape {g.shape} does not match linear output")
    return g @ tape.weights, g.T @ tape.x, g.sum(axis=0)


# --- classifier head and loss ---------------------------------------------

def log_softmax_forward(logits) -> Tuple[np.ndarray, np.ndarray]:
    z = _as_f64(logits)
    if z.ndim != 2:
        raise ShapeError(f"log_softmax expects [N, classes], got {z.shape}")
    shifted = z - z.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return log_probs, log_probs


def log_softmax_backward(log_probs: np.ndarray, upstream) -> np.ndarray:
    g = _as_f64(upstream)
    if g.shape != log_probs.shape:
        raise ShapeError(f"Upstream gradient shape {g.shape} does not match {log_probs.shape}")
    return g - np.exp(log_probs) * g.sum(axis=1, keepdims=True)


def _check_labels(labels, n: int, classes: int) -> np.ndarray:
    labels = np.asarray(labels)
    if n == 0:
        raise ShapeError("Empty batch")
    if labels.shape != (n,):
        raise ShapeError(f"Expected {n} labels, got shape {labels.shape}")
    if not np.issubdtype(labels.dtype, np.integer) or labels.min() < 0 or labels.max() >= classes:
        raise ShapeError(f"Labels must be integers in [0, {classes})")
    return labels


def nll_loss(log_probs, labels) -> Tuple[float, np.ndarray]:
    """Mean negative log-likelihood of ``labels`` and its gradient w.r.t. ``log_probs``"""
    log_probs = _as_f64(log_probs)
    n, classes = log_probs.shape
    labels = _check_labels(labels, n, classes)
    rows = np.arange(n)
    loss = -float(log_probs[rows, labels].mean())
    grad = np.zeros_like(log_probs)
    grad[rows, labels] = -1.0 / n
    return loss, grad


def log_softmax_nll(logits, labels) -> Tuple[float, np.ndarray]:
    """Fused log-softmax + NLL: returns (loss, (softmax - onehot) / N)"""
    logits = _as_f64(logits)
    if logits.ndim != 2:
        raise ShapeError(f"Expected [N, classes] logits, got {logits.shape}")
    log_probs, _ = log_softmax_forward(logits)
    n = logits.shape[0]
    labels = _check_labels(labels, n, logits.shape[1])
    rows = np.arange(n)
    loss = -float(log_probs[rows, labels].mean())
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    return loss, grad / n
