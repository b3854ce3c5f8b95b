"""
Exact statevector simulation of small qubit registers.

Basis ordering is little-endian: qubit 0 is the least-significant bit of the
basis index. All functions treat ``StateVector`` as a value and return new
instances, so a caller's state can be reused (the hybrid node evaluates the
same circuit at shifted angles).
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple
import logging
import math

import numpy as np

from .gates import Gate, QuantumError, QubitIndexError

logger = logging.getLogger(__name__)

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10


class StateError(QuantumError):
    pass


class ShotsError(QuantumError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        # freeze our private copy so no caller can mutate a shared state
        self.amplitudes.setflags(write=False)

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class MeasurementOutcome:
    counts: Dict[int, int]
    shots: int

    def frequency(self, index: int) -> float:
        return self.counts.get(index, 0) / self.shots


def _check_num_qubits(num_qubits: int) -> None:
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
        raise StateError(f"num_qubits must be an integer in [1, {MAX_QUBITS}], got {num_qubits!r}")


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise QubitIndexError(f"Qubit {qubit} out of range for a {state.num_qubits}-qubit state")


def zero_state(num_qubits: int) -> StateVector:
    """|0...0> on ``num_qubits`` qubits"""
    _check_num_qubits(num_qubits)
    amplitudes = np.zeros(2 ** num_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(int(num_qubits), amplitudes)


def from_amplitudes(amplitudes: Iterable[complex]) -> StateVector:
    """Build a state from explicit amplitudes.

    Args:
        amplitudes: 2^n complex values, unit norm within 1e-10

    Returns:
        StateVector owning a copy of the amplitudes
    """
    amps = np.array(list(amplitudes), dtype=np.complex128)
    size = amps.shape[0]
    if size < 2 or size & (size - 1):
        raise StateError(f"Amplitude count must be a power of two >= 2, got {size}")
    num_qubits = size.bit_length() - 1
    _check_num_qubits(num_qubits)
    if not np.all(np.isfinite(amps)):
        raise StateError("Amplitudes must be finite")
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    if abs(norm_sq - 1.0) > NORM_TOLERANCE:
        raise StateError(f"Amplitudes must have unit norm, squared norm is {norm_sq:.12g}")
    return StateVector(num_qubits, amps)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` and return the resulting state.

    The register is viewed as a rank-n tensor with axis ``n-1-q`` holding
    qubit q, and the gate's matrix is contracted against the axes of its
    qubits only, so the cost is O(2^n) rather than O(4^n).
    """
    gate.check_fits(state.num_qubits)
    n = state.num_qubits
    k = gate.num_qubits

    psi = state.amplitudes.reshape((2,) * n)
    # matrix axes after reshape run from the gate's most-significant qubit down
    u = gate.matrix().reshape((2,) * (2 * k))
    psi_axes = [n - 1 - q for q in reversed(gate.qubits)]

    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), psi_axes))
    out = np.moveaxis(out, list(range(k)), psi_axes)
    return StateVector(n, np.ascontiguousarray(out).reshape(-1))


def apply_circuit(state: StateVector, gates: Sequence[Gate]) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def probabilities(state: StateVector) -> np.ndarray:
    """|amplitude|^2 for every basis index"""
    return np.abs(state.amplitudes) ** 2


def sample(state: StateVector, shots: int, seed: int) -> MeasurementOutcome:
    """Measure every qubit ``shots`` times.

    Draws are i.i.d. from ``probabilities(state)`` using a generator seeded
    only by ``seed`` (taken modulo 2**64, so negative seeds are accepted);
    the same (state, shots, seed) always yields the same counts.
    """
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ShotsError(f"shots must be a positive integer, got {shots!r}")
    probs = probabilities(state)
    # renormalize away rounding drift so multinomial accepts the vector
    probs = probs / probs.sum()
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    drawn = rng.multinomial(int(shots), probs)
    counts = {int(i): int(c) for i, c in enumerate(drawn) if c > 0}
    return MeasurementOutcome(counts=counts, shots=int(shots))


def _z_signs(num_qubits: int, qubit: int) -> np.ndarray:
    indices = np.arange(2 ** num_qubits)
    return 1.0 - 2.0 * ((indices >> qubit) & 1)


def z_expectation(state: StateVector, qubit: int) -> float:
    """P(qubit reads 0) - P(qubit reads 1), computed exactly"""
    _check_qubit(state, qubit)
    value = float(np.dot(_z_signs(state.num_qubits, qubit), probabilities(state)))
    return min(1.0, max(-1.0, value))


def z_expectation_from_counts(outcome: MeasurementOutcome, qubit: int) -> float:
    """Shot estimate of the Z-expectation: (count0 - count1) / shots"""
    total = 0
    for index, count in outcome.counts.items():
        total += count if not (index >> qubit) & 1 else -count
    return total / outcome.shots


def bloch_vector(state: StateVector) -> Tuple[float, float, float]:
    """(x, y, z) Bloch coordinates of a single-qubit state"""
    if state.num_qubits != 1:
        raise StateError("Bloch coordinates are defined for single-qubit states only")
    alpha, beta = state.amplitudes
    cross = np.conj(alpha) * beta
    return 2.0 * cross.real, 2.0 * cross.imag, float(abs(alpha) ** 2 - abs(beta) ** 2)


def bloch_angles(state: StateVector) -> Tuple[float, float]:
    """Polar angle theta and azimuth phi on the Bloch sphere"""
    x, y, z = bloch_vector(state)
    theta = math.acos(min(1.0, max(-1.0, z)))
    phi = math.atan2(y, x) if math.hypot(x, y) > 1e-15 else 0.0
    return theta, phi
