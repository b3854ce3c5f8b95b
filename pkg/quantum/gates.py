"""
Gate set for the statevector simulator.

Every gate knows its small unitary (2x2 or 4x4) and the qubits it acts on.
Multi-qubit matrices use the same little-endian convention as the register:
the first qubit in ``Gate.qubits`` is the least-significant bit of the
matrix's basis index.
"""

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Optional, Tuple
import math

import numpy as np


class QuantumError(ValueError):
    """Base class for simulator errors"""


class GateError(QuantumError):
    pass


class QubitIndexError(QuantumError):
    pass


class GateKind(str, Enum):
    PAULI_X = "PauliX"
    PAULI_Y = "PauliY"
    PAULI_Z = "PauliZ"
    HADAMARD = "Hadamard"
    ROT_Y = "RotY"
    PHASE_R = "PhaseR"
    CONTROLLED_NOT = "ControlledNot"


PARAMETERIZED_KINDS = {GateKind.ROT_Y, GateKind.PHASE_R}

_SQRT_HALF = 1.0 / math.sqrt(2.0)

_FIXED_MATRICES = {
    GateKind.PAULI_X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.PAULI_Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateKind.PAULI_Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    GateKind.HADAMARD: np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=np.complex128),
    # basis index = control + 2 * target; flips the target when control is 1
    GateKind.CONTROLLED_NOT: np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
    ),
}


def rot_y_matrix(theta: float) -> np.ndarray:
    """Ry(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]"""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def phase_r_matrix(phi: float) -> np.ndarray:
    """R_phi = diag(1, e^{i phi})"""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * phi)]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    """A unitary applied to specific qubits.

    Use the named constructors (``Gate.hadamard(0)``, ``Gate.rot_y(theta, 0)``,
    ``Gate.cnot(0, 1)``...) rather than building instances by hand.
    """

    kind: GateKind
    qubits: Tuple[int, ...]
    param: Optional[float] = None

    def __post_init__(self):
        expected = 2 if self.kind == GateKind.CONTROLLED_NOT else 1
        if len(self.qubits) != expected:
            raise GateError(f"{self.kind.value} acts on {expected} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"Qubit indices must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise QubitIndexError(f"Negative qubit index in {self.qubits}")
        if self.kind in PARAMETERIZED_KINDS:
            if self.param is None or not math.isfinite(self.param):
                raise GateError(f"{self.kind.value} needs a finite angle, got {self.param}")
        elif self.param is not None:
            raise GateError(f"{self.kind.value} takes no angle")

    @classmethod
    def pauli_x(cls, target: int) -> "Gate":
        return cls(GateKind.PAULI_X, (target,))

    @classmethod
    def pauli_y(cls, target: int) -> "Gate":
        return cls(GateKind.PAULI_Y, (target,))

    @classmethod
    def pauli_z(cls, target: int) -> "Gate":
        return cls(GateKind.PAULI_Z, (target,))

    @classmethod
    def hadamard(cls, target: int) -> "Gate":
        return cls(GateKind.HADAMARD, (target,))

    @classmethod
    def rot_y(cls, theta: float, target: int) -> "Gate":
        return cls(GateKind.ROT_Y, (target,), float(theta))

    @classmethod
    def phase_r(cls, phi: float, target: int) -> "Gate":
        return cls(GateKind.PHASE_R, (target,), float(phi))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CONTROLLED_NOT, (control, target))

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def matrix(self) -> np.ndarray:
        """The gate's own 2x2 or 4x4 unitary"""
        if self.kind == GateKind.ROT_Y:
            return rot_y_matrix(self.param)
        if self.kind == GateKind.PHASE_R:
            return phase_r_matrix(self.param)
        return _FIXED_MATRICES[self.kind].copy()

    def check_fits(self, num_qubits: int) -> None:
        """Raise QubitIndexError if the gate addresses a qubit the register lacks"""
        for q in self.qubits:
            if q >= num_qubits:
                raise QubitIndexError(
                    f"{self.kind.value} addresses qubit {q} but the register has {num_qubits} qubit(s)"
                )

    def __str__(self) -> str:
        if self.param is not None:
            return f"{self.kind.value}({self.param:.6g})@{','.join(map(str, self.qubits))}"
        return f"{self.kind.value}@{','.join(map(str, self.qubits))}"


def dense_unitary(gate: Gate, num_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of ``gate`` acting on an n-qubit register.

    Slow by construction; meant as a reference for checking ``apply_gate``.

    Args:
        gate: The gate to expand
        num_qubits: Register size

    Returns:
        Complex matrix in the register's little-endian basis
    """
    gate.check_fits(num_qubits)
    identity = np.eye(2, dtype=np.complex128)

    def embed(ops_by_qubit):
        # kron order runs from the most-significant qubit down to qubit 0
        ops = [ops_by_qubit.get(q, identity) for q in reversed(range(num_qubits))]
        return reduce(np.kron, ops)

    if gate.kind == GateKind.CONTROLLED_NOT:
        control, target = gate.qubits
        p0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
        p1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)
        x = _FIXED_MATRICES[GateKind.PAULI_X]
        return embed({control: p0}) + embed({control: p1, target: x})

    return embed({gate.qubits[0]: gate.matrix()})
