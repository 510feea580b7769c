"""Jump system validation and positivity detection."""

import numpy as np
import pytest

from mjlscert import JumpSystem, is_positive_system, require_valid, validate

from conftest import random_generator


class TestValidate:
    def test_rotation_pair_is_valid(self, rotation_system):
        assert validate(rotation_system) == []

    def test_row_sum_violation_names_row(self):
        system = JumpSystem(
            modes=[np.zeros((2, 2)), np.zeros((2, 2))],
            generator=[[-1.0, 0.5], [1.0, -1.0]],
        )
        problems = validate(system)
        assert len(problems) == 1
        assert "row 0" in problems[0]
        assert "-0.5" in problems[0]

    def test_negative_off_diagonal_names_entry(self):
        system = JumpSystem(
            modes=[np.zeros((2, 2)), np.zeros((2, 2))],
            generator=[[1.0, -1.0], [1.0, -1.0]],
        )
        problems = validate(system)
        assert any("(0,1)" in p and "negative" in p for p in problems)

    def test_mode_order_mismatch_reported(self):
        system = JumpSystem(
            modes=[np.zeros((2, 2)), np.zeros((3, 3))],
            generator=[[-1.0, 1.0], [1.0, -1.0]],
        )
        assert any("modes[1]" in p for p in validate(system))

    def test_generator_shape_mismatch_reported(self):
        system = JumpSystem(modes=[np.zeros((2, 2))], generator=[[-1.0, 1.0], [1.0, -1.0]])
        assert any("generator must be 1x1" in p for p in validate(system))

    def test_non_finite_mode_entry_reported(self):
        a = np.zeros((2, 2))
        a[0, 1] = np.inf
        system = JumpSystem(modes=[a], generator=[[0.0]])
        assert any("modes[0] entry (0,1)" in p for p in validate(system))

    def test_total_and_idempotent(self):
        system = JumpSystem(
            modes=[np.full((2, 2), np.nan)],
            generator=[[np.nan]],
        )
        first = validate(system)
        second = validate(system)
        assert first == second
        assert first  # reports problems instead of raising

    def test_require_valid_raises_with_all_problems(self):
        system = JumpSystem(
            modes=[np.zeros((2, 2)), np.zeros((2, 2))],
            generator=[[-1.0, 0.5], [2.0, -1.0]],
        )
        with pytest.raises(ValueError) as err:
            require_valid(system)
        assert "row 0" in str(err.value)
        assert "row 1" in str(err.value)

    def test_absorbing_mode_is_accepted(self):
        system = JumpSystem(
            modes=[np.zeros((2, 2)), np.zeros((2, 2))],
            generator=[[0.0, 0.0], [1.0, -1.0]],
        )
        assert validate(system) == []

    def test_exit_rate_decomposition(self):
        rng = np.random.default_rng(301)
        for _ in range(20):
            q = random_generator(rng, int(rng.integers(2, 5)))
            for i in range(q.shape[0]):
                rate = -q[i, i]
                if rate > 0:
                    probs = np.delete(q[i], i) / rate
                    assert abs(probs.sum() - 1.0) <= 1e-12


class TestIsPositiveSystem:
    def test_rotation_mode_is_not_metzler(self, rotation_system):
        assert not is_positive_system(rotation_system)

    def test_diagonal_modes_are_positive(self):
        system = JumpSystem(
            modes=[np.diag([-1.0, 2.0]), np.diag([0.5, -3.0])],
            generator=[[-1.0, 1.0], [1.0, -1.0]],
        )
        assert is_positive_system(system)

    def test_forced_nonnegative_off_diagonals(self):
        rng = np.random.default_rng(302)
        modes = []
        for _ in range(3):
            a = rng.standard_normal((3, 3))
            off_mask = ~np.eye(3, dtype=bool)
            a[off_mask] = np.abs(a[off_mask])
            modes.append(a)
        system = JumpSystem(modes=modes, generator=random_generator(rng, 3))
        assert is_positive_system(system)


class TestConstruction:
    def test_coerces_nested_lists(self):
        system = JumpSystem(modes=[[[0, 1], [1, 0]]], generator=[[0]])
        assert system.modes[0].dtype == float
        assert system.dim == 2
        assert system.num_modes == 1

    def test_rejects_non_numeric(self):
        with pytest.raises(ValueError, match="numeric"):
            JumpSystem(modes=[[["a", "b"], ["c", "d"]]], generator=[[0]])
