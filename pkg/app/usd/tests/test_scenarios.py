import math
from unittest import TestCase
import numpy as np
from dilation.coupling import SIGMA_X, SIGMA_Z, apply_coupling, recomplete
from extensions.utilities.test import MatrixAssertionsMixin
from linalg.matrices import kron, projector, state_fidelity
from sequential.tree import TreeNode
from usd.problem import conclusive_probability, inconclusive_probability
from usd.scenarios import (
    CONCLUSIVENESS_FIRST,
    STATE_FIRST,
    build_scenario,
    scenario_conclusiveness_first,
    scenario_state_first,
)
from usd.sweep import SWEEP_CSV_COLUMNS, sweep
from usd.tests import OMEGAS


PLUS = np.array([1, 1]) / math.sqrt(2)
MINUS = np.array([1, -1]) / math.sqrt(2)
KET0, KET1 = np.array([1, 0]), np.array([0, 1])


class TestStatistics(TestCase):
    """Test the outcome statistics of both scenarios."""

    def test_inconclusive_and_conclusive(self) -> None:
        """Test `P(?) = cos 2ω` and `P(conclusive) = 2 sin²ω` for both scenarios and inputs."""
        for omega in OMEGAS:
            for kind in (CONCLUSIVENESS_FIRST, STATE_FIRST):
                scenario = build_scenario(kind, omega)
                for name, state in scenario.problem.inputs.items():
                    with self.subTest("Scenario.", omega=omega, scenario=kind, input=name):
                        distribution = scenario.distribution(state)
                        self.assertAlmostEqual(inconclusive_probability(omega), distribution["?"], delta=1e-12)
                        conclusive = distribution["1"] + distribution["2"]
                        self.assertAlmostEqual(conclusive_probability(omega), conclusive, delta=1e-12)

    def test_unambiguous(self) -> None:
        """Test `2` never happens on `psi_1` and `1` never on `psi_2`."""
        for omega in OMEGAS:
            for kind in (CONCLUSIVENESS_FIRST, STATE_FIRST):
                scenario = build_scenario(kind, omega)
                with self.subTest("Scenario.", omega=omega, scenario=kind):
                    self.assertLessEqual(scenario.distribution(scenario.problem.input_state(0))["2"], 1e-12)
                    self.assertLessEqual(scenario.distribution(scenario.problem.input_state(1))["1"], 1e-12)

    def test_order_does_not_matter(self) -> None:
        """Test both scenarios give the same distribution on both inputs."""
        for omega in OMEGAS:
            first, second = scenario_conclusiveness_first(omega), scenario_state_first(omega)
            for name, state in first.problem.inputs.items():
                with self.subTest("Input.", omega=omega, input=name):
                    a, b = first.distribution(state), second.distribution(state)
                    for label in ("1", "2", "?"):
                        self.assertAlmostEqual(a[label], b[label], delta=1e-10)

    def test_display_residuals(self) -> None:
        """Test the first circuit of every scenario matches its closed form."""
        for omega in OMEGAS:
            for kind in (CONCLUSIVENESS_FIRST, STATE_FIRST):
                with self.subTest("Scenario.", omega=omega, scenario=kind):
                    scenario = build_scenario(kind, omega)
                    self.assertLess(scenario.display_residual, 1e-12)
                    self.assertEqual(len(scenario.circuits), len(scenario.factorizations))

    def test_unknown_scenario(self) -> None:
        """Test unknown scenario names are rejected."""
        with self.assertRaises(ValueError):
            build_scenario("state-last", 0.4)


class TestConclusivenessFirst(MatrixAssertionsMixin, TestCase):
    """Test the scenario measuring conclusiveness first at `ω = 0.4`."""

    OMEGA = 0.4

    def setUp(self) -> None:
        self.scenario = scenario_conclusiveness_first(self.OMEGA)
        self.s, self.root = math.sin(self.OMEGA), math.sqrt(math.cos(2 * self.OMEGA))

    def test_circuit(self) -> None:
        """Test `V_0 = σ_z` and `V_1` starts with `(tan ω, sqrt(1 - tan²ω))`."""
        circuit = self.scenario.circuits[0]
        t = math.tan(self.OMEGA)
        self.assertMatrixAlmostEqual(SIGMA_Z, circuit.blocks[0], tol=1e-14)
        self.assertMatrixAlmostEqual([t, math.sqrt(1 - t * t)], circuit.blocks[1][:, 0], tol=1e-14)

    def test_premeasurement_state(self) -> None:
        """Test the joint state equals `-sqrt(2) sin ω |±>|0> + sqrt(cos 2ω) |1>|1>` up to a local ancilla phase."""
        ancilla_phase = kron(np.eye(2), SIGMA_Z)
        for index, sign in enumerate((PLUS, MINUS)):
            with self.subTest("Input.", index=index):
                joint = self.scenario.premeasurement(self.scenario.problem.states[index])
                expected = -math.sqrt(2) * self.s * np.kron(sign, KET0) + self.root * np.kron(KET1, KET1)
                fidelity = max(state_fidelity(expected, joint), state_fidelity(expected, ancilla_phase @ joint))
                self.assertAlmostEqual(1.0, fidelity, delta=1e-10)
                self.assertAlmostEqual(2 * self.s**2, float(np.linalg.norm(joint[0::2]) ** 2), places=14)
                self.assertAlmostEqual(self.root**2, float(np.linalg.norm(joint[1::2]) ** 2), places=14)

    def test_post_measurement_states(self) -> None:
        """Test the conclusive branch leaves `|±>` and the inconclusive one forgets the input."""
        circuit = self.scenario.circuits[0]
        for expected, state in zip((PLUS, MINUS), self.scenario.problem.inputs.values()):
            conclusive, inconclusive = apply_coupling(circuit, state)
            assert conclusive.state is not None and inconclusive.state is not None
            self.assertAlmostEqual(1.0, state_fidelity(expected, conclusive.state.matrix), delta=1e-10)
            # Computational |0> in the lab frame, |1> in the eigenbasis of B
            self.assertMatrixAlmostEqual(projector(2, 0), inconclusive.state.matrix, tol=1e-10)
            rotated = circuit.basis_change @ inconclusive.state.matrix @ circuit.basis_change.conj().T
            self.assertMatrixAlmostEqual(projector(2, 1), rotated, tol=1e-10)

    def test_updated_measurement(self) -> None:
        """Test the measurement after a conclusive result is `{P_+, P_-}`."""
        second = self.scenario.tree.root.child_in
        assert isinstance(second, TreeNode)
        self.assertMatrixAlmostEqual(np.outer(PLUS, PLUS), second.effect.matrix, tol=1e-12)
        report = self.scenario.execute(self.scenario.problem.input_state(0))
        assert report["1"].post_state is not None
        self.assertAlmostEqual(1.0, state_fidelity(PLUS, report["1"].post_state.matrix), delta=1e-10)


class TestStateFirst(MatrixAssertionsMixin, TestCase):
    """Test the scenario asking for `psi_1` first at `ω = 0.4`."""

    OMEGA = 0.4

    def setUp(self) -> None:
        self.scenario = scenario_state_first(self.OMEGA)
        self.c, self.s = math.cos(self.OMEGA), math.sin(self.OMEGA)
        self.root = math.sqrt(math.cos(2 * self.OMEGA))

    def test_circuit(self) -> None:
        """Test `U_B`, `V_0` and `V_1`, the latter up to the completion giving `-iσ_y`."""
        circuit = self.scenario.circuits[0]
        self.assertMatrixAlmostEqual([[self.s, self.c], [self.c, -self.s]], circuit.basis_change, tol=1e-14)
        v0 = np.array([[1, self.root], [self.root, -1]]) / (math.sqrt(2) * self.c)
        self.assertMatrixAlmostEqual(v0, circuit.blocks[0], tol=1e-14)
        self.assertMatrixAlmostEqual(SIGMA_X, circuit.blocks[1], tol=1e-14)
        self.assertMatrixAlmostEqual([[0, -1], [1, 0]], recomplete(circuit, [1, -1]).blocks[1], tol=1e-14)

    def test_second_input(self) -> None:
        """Test `psi_2` always answers `1'`, stays unchanged and ends in `2` with probability `2 sin²ω`."""
        state = self.scenario.problem.input_state(1)
        self.assertMatrixAlmostEqual(
            np.kron(KET1, KET1), self.scenario.premeasurement(self.scenario.problem.states[1]), tol=1e-14
        )
        happened, not_happened = apply_coupling(self.scenario.circuits[0], state)
        self.assertTrue(happened.is_null)
        self.assertAlmostEqual(1.0, not_happened.weight, places=14)
        assert not_happened.state is not None
        self.assertMatrixAlmostEqual(state.matrix, not_happened.state.matrix, tol=1e-12)
        distribution = self.scenario.distribution(state)
        self.assertAlmostEqual(2 * self.s**2, distribution["2"], delta=1e-12)

    def test_first_input(self) -> None:
        """Test the joint state of `psi_1`, its post-`1'` state and the Lüders state after `1`."""
        joint = self.scenario.premeasurement(self.scenario.problem.states[0])
        expected = math.sqrt(2) * self.s * np.kron(KET0, KET0) + self.root * np.kron(
            math.sqrt(2) * self.s * KET0 + self.root * KET1, KET1
        )
        self.assertMatrixAlmostEqual(expected, joint, tol=1e-14)

        circuit = self.scenario.circuits[0]
        happened, not_happened = apply_coupling(circuit, self.scenario.problem.input_state(0))
        self.assertAlmostEqual(2 * self.s**2, happened.weight, places=14)
        self.assertAlmostEqual(self.root**2, not_happened.weight, places=14)
        assert happened.state is not None and not_happened.state is not None
        tilde = circuit.basis_change.conj().T @ np.array([math.sqrt(2) * self.s, self.root])
        self.assertAlmostEqual(1.0, state_fidelity(tilde, not_happened.state.matrix), delta=1e-10)
        # Outcome 1 collapses onto the support of A_1, which is psi_2⊥
        self.assertAlmostEqual(1.0, state_fidelity(self.scenario.problem.perps[1], happened.state.matrix), delta=1e-10)

    def test_updated_measurement(self) -> None:
        """Test the second node measures `A' = (P_2 + P_2⊥ / sqrt(1 - λ)) λ P_1⊥ (P_2 + P_2⊥ / sqrt(1 - λ))`."""
        problem = self.scenario.problem
        p2 = np.outer(problem.states[1], problem.states[1])
        p2_perp = np.outer(problem.perps[1], problem.perps[1])
        p1_perp = np.outer(problem.perps[0], problem.perps[0])
        scale = p2 + p2_perp / math.sqrt(1 - problem.lam)
        second = self.scenario.tree.root.child_out
        assert isinstance(second, TreeNode)
        self.assertMatrixAlmostEqual(scale @ (problem.lam * p1_perp) @ scale, second.effect.matrix, tol=1e-12)


class TestSweep(TestCase):
    """Test `sweep`."""

    def test_exact_rows(self) -> None:
        """Test one row per angle, scenario, input and outcome, with `cos 2ω` in the inconclusive rows."""
        omegas = [0.1, 0.3, 0.5, 0.7]
        rows = sweep(omegas)
        self.assertEqual(len(omegas) * 2 * 2 * 3, len(rows))
        for row in rows:
            if row.outcome == "?":
                self.assertAlmostEqual(math.cos(2 * row.omega), row.exact_p, delta=1e-12)
            self.assertIsNone(row.emp_freq)
        self.assertEqual(SWEEP_CSV_COLUMNS, list(rows[0].as_csv()))
        self.assertEqual("", rows[0].as_csv()["shots"])

    def test_state_first_never_says_two_on_psi1(self) -> None:
        """Test the state-first scenario never answers `2` on `psi_1`."""
        for row in sweep([0.1, 0.4, math.pi / 4], kinds=[STATE_FIRST]):
            if row.input == "psi1" and row.outcome == "2":
                self.assertLessEqual(row.exact_p, 1e-12)

    def test_sampled_rows(self) -> None:
        """Test sampled sweeps carry frequencies and are reproducible."""
        rows = sweep([0.4], kinds=[CONCLUSIVENESS_FIRST], shots=1000, seed=5)
        rerun = sweep([0.4], kinds=[CONCLUSIVENESS_FIRST], shots=1000, seed=5)
        self.assertEqual([row.as_csv() for row in rows], [row.as_csv() for row in rerun])
        for row in rows:
            self.assertIsNotNone(row.emp_freq)
            self.assertEqual(1000, row.shots)
        self.assertAlmostEqual(2.0, sum(row.emp_freq or 0.0 for row in rows))

    def test_orthogonal_rows(self) -> None:
        """Test `ω = π/4` gives zero inconclusive probability."""
        for row in sweep([math.pi / 4]):
            if row.outcome == "?":
                self.assertEqual("0", row.as_csv()["exact_p"])
