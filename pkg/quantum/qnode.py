"""
Single-qubit hybrid node.

A real activation is used as the angle of a y-rotation applied after a
Hadamard on |0>; the node's output is the qubit's Z-expectation, exactly
``-sin(theta)`` in exact mode. Its derivative comes from the symmetric
angle-shift rule, two extra evaluations of the same circuit.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .gates import Gate, QuantumError
from .statevector import apply_circuit, sample, z_expectation, z_expectation_from_counts, zero_state

logger = logging.getLogger(__name__)

DEFAULT_SHIFT = math.pi / 2
# below this |sin(shift)| the shift rule divides rounding noise by ~0
MIN_SHIFT_SINE = 1e-6

# evaluation roles mixed into the RNG stream key in shot mode
ROLE_FORWARD = 0
ROLE_SHIFT_PLUS = 1
ROLE_SHIFT_MINUS = 2


class QNodeConfig(BaseModel):
    """How the quantum node is evaluated.

    shots = 0 gives the exact expectation; shots > 0 estimates it from
    simulated measurements.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    shots: int = Field(default=0, ge=0)
    shift: float = Field(default=DEFAULT_SHIFT, gt=0.0, le=math.pi)
    seed: int = 0

    @model_validator(mode="after")
    def _warn_degenerate_shift(self):
        if abs(math.sin(self.shift)) < MIN_SHIFT_SINE:
            logger.warning("Shift %.17g has sin(shift) ~ 0; parameter-shift gradients will be noise", self.shift)
        return self


@dataclass(frozen=True)
class QNodeTape:
    theta: float
    output: float
    stream: Tuple[int, ...] = ()


def node_circuit(theta: float) -> Sequence[Gate]:
    return (Gate.hadamard(0), Gate.rot_y(theta, 0))


def _stream_seed(config: QNodeConfig, stream: Sequence[int], role: int) -> int:
    """64-bit seed for one shot-mode evaluation, independent per (seed, stream, role)"""
    seq = np.random.SeedSequence([config.seed & 0xFFFFFFFFFFFFFFFF, *stream, role])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _expectation(theta: float, config: QNodeConfig, stream: Sequence[int], role: int) -> float:
    state = apply_circuit(zero_state(1), node_circuit(theta))
    if config.shots == 0:
        return z_expectation(state, 0)
    outcome = sample(state, config.shots, _stream_seed(config, stream, role))
    return z_expectation_from_counts(outcome, 0)


def qnode_forward(theta: float, config: QNodeConfig, stream: Sequence[int] = ()) -> Tuple[float, QNodeTape]:
    """Evaluate the node at angle ``theta``.

    Args:
        theta: Rotation angle in radians (the upstream activation, unbounded)
        config: Evaluation settings
        stream: Extra integers identifying this evaluation (e.g. step and
            sample index); only used to derive shot-mode RNG streams

    Returns:
        (output, tape) where output lies in [-1, 1]
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise QuantumError(f"Node angle must be finite, got {theta}")
    stream = tuple(int(s) for s in stream)
    output = _expectation(theta, config, stream, ROLE_FORWARD)
    return output, QNodeTape(theta=theta, output=output, stream=stream)


def qnode_backward(tape: QNodeTape, upstream_grad: float, config: QNodeConfig) -> float:
    """Chain ``upstream_grad`` through the node with the shift rule.

    d/dtheta E = (E(theta + s) - E(theta - s)) / (2 sin s). The rule is exact
    in real arithmetic because E is sinusoidal in theta, but as s nears pi
    the denominator vanishes and floating-point results degrade; s = pi gives
    rounding noise.
    """
    shift = config.shift
    if not 0.0 < shift <= math.pi:
        raise QuantumError(f"Shift must lie in (0, pi], got {shift}")
    if upstream_grad == 0.0:
        return 0.0
    plus = _expectation(tape.theta + shift, config, tape.stream, ROLE_SHIFT_PLUS)
    minus = _expectation(tape.theta - shift, config, tape.stream, ROLE_SHIFT_MINUS)
    return float(upstream_grad) * (plus - minus) / (2.0 * math.sin(shift))
