import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from quantum import DEFAULT_SHIFT, QNodeConfig, QNodeTape, QuantumError, qnode_backward, qnode_forward

EXACT = QNodeConfig()


class TestForward:
    @pytest.mark.parametrize("theta, expected", [(0.0, 0.0), (math.pi / 2, -1.0), (-math.pi / 2, 1.0)])
    def test_known_angles(self, theta, expected):
        output, tape = qnode_forward(theta, EXACT)
        assert output == pytest.approx(expected, abs=1e-12)
        assert tape.theta == theta
        assert tape.output == output

    def test_exact_mode_is_minus_sine(self, rng):
        for theta in rng.uniform(-np.pi, np.pi, size=1000):
            output, _ = qnode_forward(theta, EXACT)
            assert abs(output + math.sin(theta)) < 1e-12

    def test_non_finite_angle(self):
        with pytest.raises(QuantumError):
            qnode_forward(float("nan"), EXACT)

    def test_shot_mode_close_to_exact(self):
        config = QNodeConfig(shots=10 ** 4, seed=9)
        output, _ = qnode_forward(math.pi / 2, config)
        assert abs(output + 1.0) <= 0.03

    def test_shot_mode_converges(self, rng):
        config = QNodeConfig(shots=10 ** 5, seed=21)
        thetas = rng.uniform(-np.pi, np.pi, size=100)
        hits = sum(abs(qnode_forward(t, config, stream=(i,))[0] + math.sin(t)) <= 0.01 for i, t in enumerate(thetas))
        assert hits >= 99

    def test_shot_mode_deterministic_per_stream(self):
        config = QNodeConfig(shots=200, seed=4)
        first, _ = qnode_forward(0.3, config, stream=(0, 1))
        again, _ = qnode_forward(0.3, config, stream=(0, 1))
        assert first == again
        others = {qnode_forward(0.3, config, stream=(0, i))[0] for i in range(20)}
        assert len(others) > 1

    def test_output_bounded(self, rng):
        config = QNodeConfig(shots=7, seed=1)
        for theta in rng.uniform(-10, 10, size=50):
            assert -1.0 <= qnode_forward(theta, config)[0] <= 1.0


class TestBackward:
    def test_zero_angle(self):
        _, tape = qnode_forward(0.0, EXACT)
        assert qnode_backward(tape, 1.0, EXACT) == pytest.approx(-1.0, abs=1e-12)

    def test_quarter_turn(self):
        _, tape = qnode_forward(math.pi / 2, EXACT)
        assert abs(qnode_backward(tape, 1.0, EXACT)) < 1e-12

    def test_zero_upstream(self):
        _, tape = qnode_forward(0.0, EXACT)
        assert qnode_backward(tape, 0.0, EXACT) == 0.0

    def test_matches_analytic_and_finite_difference(self, rng):
        eps = 1e-6
        for theta in rng.uniform(-np.pi, np.pi, size=200):
            _, tape = qnode_forward(theta, EXACT)
            grad = qnode_backward(tape, 1.0, EXACT)
            assert abs(grad + math.cos(theta)) < 1e-12
            numeric = (qnode_forward(theta + eps, EXACT)[0] - qnode_forward(theta - eps, EXACT)[0]) / (2 * eps)
            assert abs(grad - numeric) < 1e-6

    def test_chain_rule_scales_upstream(self):
        _, tape = qnode_forward(0.4, EXACT)
        assert qnode_backward(tape, -2.5, EXACT) == pytest.approx(2.5 * math.cos(0.4), abs=1e-12)

    @pytest.mark.parametrize("shift", [math.pi / 6, math.pi / 4, math.pi / 2])
    def test_shift_invariance(self, shift, rng):
        config = QNodeConfig(shift=shift)
        for theta in rng.uniform(-np.pi, np.pi, size=50):
            _, tape = qnode_forward(theta, config)
            assert abs(qnode_backward(tape, 1.0, config) + math.cos(theta)) < 1e-10

    def test_invalid_shift_rejected_by_backward(self):
        # bypass validation to reach the runtime guard
        config = QNodeConfig.model_construct(shots=0, shift=4.0, seed=0)
        with pytest.raises(QuantumError):
            qnode_backward(QNodeTape(theta=0.0, output=0.0), 1.0, config)

    def test_half_turn_shift_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="quantum.qnode"):
            QNodeConfig(shift=math.pi)
        assert any("sin(shift)" in r.getMessage() for r in caplog.records)

    def test_usual_shift_is_quiet(self, caplog):
        with caplog.at_level(logging.WARNING, logger="quantum.qnode"):
            QNodeConfig(shift=DEFAULT_SHIFT)
            QNodeConfig(shift=3.0)
        assert not [r for r in caplog.records if r.name == "quantum.qnode"]


class TestConfig:
    def test_defaults(self):
        assert EXACT.shots == 0
        assert EXACT.shift == DEFAULT_SHIFT

    @pytest.mark.parametrize("settings", [{"shift": 0.0}, {"shift": 3.5}, {"shots": -1}, {"unknown": 1}])
    def test_invalid(self, settings):
        with pytest.raises(ValidationError):
            QNodeConfig(**settings)
