# Statevector simulator and the hybrid quantum node
from .gates import Gate, GateKind, GateError, QuantumError, QubitIndexError, dense_unitary
from .statevector import (
    MAX_QUBITS,
    MeasurementOutcome,
    ShotsError,
    StateError,
    StateVector,
    apply_circuit,
    apply_gate,
    bloch_angles,
    bloch_vector,
    from_amplitudes,
    probabilities,
    sample,
    z_expectation,
    z_expectation_from_counts,
    zero_state,
)
from .qnode import DEFAULT_SHIFT, QNodeConfig, QNodeTape, qnode_backward, qnode_forward

__all__ = [
    'Gate',
    'GateKind',
    'GateError',
    'QuantumError',
    'QubitIndexError',
    'dense_unitary',
    'MAX_QUBITS',
    'MeasurementOutcome',
    'ShotsError',
    'StateError',
    'StateVector',
    'apply_circuit',
    'apply_gate',
    'bloch_angles',
    'bloch_vector',
    'from_amplitudes',
    'probabilities',
    'sample',
    'z_expectation',
    'z_expectation_from_counts',
    'zero_state',
    'DEFAULT_SHIFT',
    'QNodeConfig',
    'QNodeTape',
    'qnode_backward',
    'qnode_forward',
]
