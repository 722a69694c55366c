import math
from unittest import TestCase
import numpy as np
from django.core.exceptions import ValidationError
from extensions.utilities.test import MatrixAssertionsMixin, error_codes
from linalg.exceptions import DimensionMismatch
from povm.generators import random_effect, random_povm, random_state
from povm.measurement import (
    born_probability,
    coarse_grain,
    conditional_update,
    lueders_branch,
    lueders_instrument,
    outcome_probabilities,
    validate_povm,
)
from povm.structures import Effect, Partition, State
from povm.tests import OMEGA, sample_projective_povm, sample_usd_povm, trine_matrices, usd_matrices, usd_states


PLUS = np.array([1, 1]) / math.sqrt(2)
MINUS = np.array([1, -1]) / math.sqrt(2)


class TestValidatePovm(MatrixAssertionsMixin, TestCase):
    """Test `validate_povm`."""

    def test_valid(self) -> None:
        """Test valid POVMs are accepted and keep their labels."""
        with self.subTest("Computational basis projectors."):
            povm = sample_projective_povm()
            self.assertEqual(("0", "1"), povm.labels)
            self.assertEqual(2, povm.dim)
        with self.subTest("Discrimination effects.", omega=OMEGA):
            povm = sample_usd_povm()
            self.assertEqual(("1", "2", "?"), povm.labels)
            self.assertMatrixAlmostEqual(np.eye(2), povm.support)
            self.assertFalse(povm.rank_deficient)
        with self.subTest("Trine."):
            self.assertEqual(("1", "2", "3"), validate_povm(trine_matrices()).labels)

    def test_sum_not_identity(self) -> None:
        """Test `{I, I}` is rejected with `sum_not_identity`."""
        with self.assertRaises(ValidationError) as ctx:
            validate_povm([np.eye(2), np.eye(2)])
        self.assertEqual(["sum_not_identity"], error_codes(ctx.exception))
        self.assertAlmostEqual(math.sqrt(2), ctx.exception.error_list[0].params["residual"])

    def test_empty_list(self) -> None:
        """Test an empty list is rejected."""
        with self.assertRaises(ValidationError) as ctx:
            validate_povm([])
        self.assertEqual(["empty_list"], error_codes(ctx.exception))

    def test_dim_mismatch(self) -> None:
        """Test mixed dimensions, rectangular matrices and a wrong declared dimension are rejected."""
        cases = [
            ([np.eye(2), np.eye(3)], None),
            ([np.ones((2, 3))], None),
            ([np.diag([1, 0]), np.diag([0, 1])], 3),
        ]
        for matrices, dim in cases:
            with self.subTest("Dimension mismatch.", dim=dim):
                with self.assertRaises(ValidationError) as ctx:
                    validate_povm(matrices, dim=dim)
                self.assertEqual(["dim_mismatch"], error_codes(ctx.exception))

    def test_violations_are_collected(self) -> None:
        """Test every failing effect is reported with its index, together with the sum residual."""
        matrices = [np.diag([1.5, 0]), [[0, 1], [0, 0]], np.diag([-0.5, 1])]
        with self.assertRaises(ValidationError) as ctx:
            validate_povm(matrices)
        errors = ctx.exception.error_list
        self.assertEqual(["not_effect", "not_effect", "not_effect", "sum_not_identity"], error_codes(ctx.exception))
        self.assertEqual([0, 1, 2], [e.params["index"] for e in errors[:3]])

    def test_clamps_within_tolerance(self) -> None:
        """Test eigenvalues slightly outside [0, 1] are clamped instead of rejected."""
        povm = validate_povm([np.diag([1 + 1e-12, 0]), np.diag([-1e-12, 1])])
        self.assertEqual(1.0, float(np.max(np.real(np.diag(povm[0].matrix)))))
        self.assertEqual(0.0, float(np.min(np.real(np.diag(povm[1].matrix)))))


class TestBornAndLueders(MatrixAssertionsMixin, TestCase):
    """Test Born probabilities and the Lüders instrument."""

    def test_identity_has_probability_one(self) -> None:
        """Test `tr(I ρ) = 1` for random states."""
        rng = np.random.default_rng(0)
        identity = Effect.create(np.eye(3), "I")
        for _ in range(5):
            self.assertAlmostEqual(1.0, born_probability(identity, random_state(rng, 3)), places=14)

    def test_usd_probabilities(self) -> None:
        """Test the inconclusive probability is `cos 2ω` and the wrong conclusive outcome never fires."""
        a1, a2, inconclusive = sample_usd_povm()
        psi1, psi2 = usd_states()
        self.assertAlmostEqual(math.cos(2 * OMEGA), born_probability(inconclusive, psi1), places=14)
        self.assertAlmostEqual(0.6967067093471654, born_probability(inconclusive, psi1), places=12)
        self.assertLess(born_probability(a2, psi1), 1e-15)
        self.assertLess(born_probability(a1, psi2), 1e-15)

    def test_dim_mismatch(self) -> None:
        """Test an effect and a state of different dimensions are rejected."""
        with self.assertRaises(DimensionMismatch):
            born_probability(Effect.create(np.eye(2), "I"), State.pure([1, 0, 0]))

    def test_projector_branch(self) -> None:
        """Test measuring `|0><0|` on `|0>` keeps the state with weight 1."""
        branch = lueders_branch(sample_projective_povm()[0], State.pure([1, 0]))
        self.assertAlmostEqual(1.0, branch.weight)
        assert branch.state is not None
        self.assertMatrixAlmostEqual(np.diag([1, 0]), branch.state.matrix)

    def test_conclusive_branch(self) -> None:
        """Test the conclusive coarse effect sends `ψ_1` to `|+>` and `ψ_2` to `|->` with weight `2 sin²ω`."""
        conclusive = Effect.create(usd_matrices()[0] + usd_matrices()[1], "1+2")
        for state, expected in zip(usd_states(), (PLUS, MINUS)):
            branch = lueders_branch(conclusive, state)
            self.assertAlmostEqual(2 * math.sin(OMEGA) ** 2, branch.weight, places=14)
            assert branch.state is not None
            self.assertFidelityOne(expected, branch.state.matrix)

    def test_inconclusive_branch_forgets_the_input(self) -> None:
        """Test the inconclusive effect leaves both inputs in the same state."""
        inconclusive = sample_usd_povm()[2]
        states = [lueders_branch(inconclusive, state).state for state in usd_states()]
        assert states[0] is not None and states[1] is not None
        self.assertMatrixAlmostEqual(states[0].matrix, states[1].matrix)
        self.assertMatrixAlmostEqual(np.diag([1, 0]), states[0].matrix)

    def test_null_branch(self) -> None:
        """Test a zero-probability branch carries no state."""
        branch = lueders_branch(sample_usd_povm()[1], usd_states()[0])
        self.assertTrue(branch.is_null)
        self.assertLess(branch.weight, 1e-12)

    def test_weights_sum_to_one(self) -> None:
        """Test the branch weights of random POVMs sum to 1 for random states."""
        rng = np.random.default_rng(1)
        for dim, n in ((2, 3), (3, 5), (4, 8)):
            with self.subTest("Random POVM.", dim=dim, n=n):
                branches = lueders_instrument(random_povm(rng, dim, n), random_state(rng, dim))
                self.assertAlmostEqual(1.0, sum(b.weight for b in branches), delta=1e-10)


class TestCoarseGrain(MatrixAssertionsMixin, TestCase):
    """Test `coarse_grain`."""

    def test_singletons(self) -> None:
        """Test the singleton partition reproduces the POVM."""
        povm = sample_usd_povm()
        coarse = coarse_grain(povm, Partition.singletons(3))
        self.assertEqual(povm.labels, coarse.labels)
        for original, merged in zip(povm, coarse):
            self.assertMatrixAlmostEqual(original.matrix, merged.matrix, tol=1e-14)

    def test_conclusiveness(self) -> None:
        """Test `{{?}, {1, 2}}` gives `{A_?, I - A_?}`."""
        povm = sample_usd_povm()
        coarse = coarse_grain(povm, [[2], [0, 1]])
        self.assertEqual(("?", "1+2"), coarse.labels)
        self.assertMatrixAlmostEqual(povm[2].matrix, coarse[0].matrix, tol=1e-14)
        self.assertMatrixAlmostEqual(np.eye(2) - povm[2].matrix, coarse[1].matrix, tol=1e-14)

    def test_sums(self) -> None:
        """Test `{{1, 2}, {3, 4}}` on a random 4-outcome POVM sums the members."""
        povm = random_povm(np.random.default_rng(2), 3, 4)
        coarse = coarse_grain(povm, [[0, 1], [2, 3]])
        self.assertMatrixAlmostEqual(povm[0].matrix + povm[1].matrix, coarse[0].matrix, tol=1e-14)
        self.assertMatrixAlmostEqual(povm[3].matrix + povm[2].matrix, coarse[1].matrix, tol=1e-14)
        self.assertMatrixAlmostEqual(np.eye(3), coarse[0].matrix + coarse[1].matrix, tol=1e-12)

    def test_bad_partition(self) -> None:
        """Test overlapping, incomplete, empty and out of range cells are rejected."""
        povm = sample_usd_povm()
        for cells in ([[0, 1], [1, 2]], [[0], [1]], [[0, 1, 2], []], [[0, 1], [2, 3]]):
            with self.subTest("Bad partition.", cells=cells):
                with self.assertRaises(ValidationError) as ctx:
                    coarse_grain(povm, cells)
                self.assertEqual("bad_partition", ctx.exception.code)


class TestConditionalUpdate(MatrixAssertionsMixin, TestCase):
    """Test `conditional_update`."""

    def test_whole_povm(self) -> None:
        """Test updating on every outcome (`B = I`) changes nothing."""
        povm = sample_usd_povm()
        updated = conditional_update(povm, [0, 1, 2])
        for original, new in zip(povm, updated):
            self.assertMatrixAlmostEqual(original.matrix, new.matrix, tol=1e-12)

    def test_conclusive_update(self) -> None:
        """Test the update after a conclusive answer is `{P_+, P_-}`."""
        updated = conditional_update(sample_usd_povm(), [0, 1])
        self.assertEqual(("1", "2"), updated.labels)
        self.assertMatrixAlmostEqual(np.outer(PLUS, PLUS), updated[0].matrix, tol=1e-12)
        self.assertMatrixAlmostEqual(np.outer(MINUS, MINUS), updated[1].matrix, tol=1e-12)

    def test_state_first_update(self) -> None:
        """Test the update after "not 1" matches `(P_2 + P_2⊥/√(1-λ)) λP_1⊥ (P_2 + P_2⊥/√(1-λ))`."""
        c, s = math.cos(OMEGA), math.sin(OMEGA)
        lam = 1 / (2 * c * c)
        p2, p2_perp, p1_perp = (np.outer(v, v) for v in ([c, -s], [s, c], [s, -c]))
        side = p2 + p2_perp / math.sqrt(1 - lam)
        updated = conditional_update(sample_usd_povm(), [1, 2])
        self.assertMatrixAlmostEqual(side @ (lam * p1_perp) @ side, updated[0].matrix, tol=1e-12)
        self.assertMatrixAlmostEqual(np.eye(2), updated[0].matrix + updated[1].matrix, tol=1e-12)

    def test_sequential_consistency(self) -> None:
        """Test `tr(L_B(ρ) A'_j) · tr(Bρ) = tr(ρ A_j)` on random POVMs, cells and states."""
        rng = np.random.default_rng(3)
        for trial in range(40):
            dim, n = int(rng.integers(2, 5)), int(rng.integers(2, 9))
            povm = random_povm(rng, dim, n, rank=int(rng.integers(math.ceil(dim / n), dim + 1)))
            cell = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
            state = random_state(rng, dim)
            with self.subTest("Random update.", trial=trial, dim=dim, n=n, cell=cell):
                coarse = Effect.clamped(sum(povm[i].matrix for i in cell), "B")
                branch = lueders_branch(coarse, state)
                assert branch.state is not None
                updated = conditional_update(povm, cell)
                for j, effect in zip(cell, updated):
                    sequential = branch.weight * born_probability(effect, branch.state)
                    self.assertAlmostEqual(born_probability(povm[j], state), sequential, delta=1e-9)
                self.assertMatrixAlmostEqual(updated.support, sum(updated.matrices), tol=1e-10)

    def test_rank_deficient(self) -> None:
        """Test a rank deficient coarse effect yields effects summing to its range projector."""
        povm = validate_povm([np.diag([1, 0, 0]), np.diag([0, 0.5, 0]), np.diag([0, 0.5, 1])])
        with self.assertLogs("povm.measurement", "DEBUG") as logs:
            updated = conditional_update(povm, [0, 1])
        self.assertIn("rank 2 < 3", logs.output[0])
        self.assertTrue(updated.rank_deficient)
        self.assertMatrixAlmostEqual(np.diag([1, 1, 0]), updated.support, tol=1e-12)
        self.assertMatrixAlmostEqual(np.diag([1, 0, 0]), updated[0].matrix, tol=1e-12)
        self.assertMatrixAlmostEqual(np.diag([0, 1, 0]), updated[1].matrix, tol=1e-12)

    def test_rank_deficiency_logged_against_support(self) -> None:
        """Test an update of an update reports its rank against the support of the updated POVM."""
        povm = sample_projective_povm(4)
        with self.assertLogs("povm.measurement", "DEBUG") as logs:
            conditional_update(conditional_update(povm, [0, 1, 2]), [0, 1])
        self.assertIn("rank 3 < 4", logs.output[0])
        self.assertIn("rank 2 < 3", logs.output[1])

    def test_rank_one_povm_is_not_a_warning(self) -> None:
        """Test updates of rank-1 POVMs such as the USD measurement log nothing at warning level."""
        with self.assertNoLogs("povm.measurement", "WARNING"):
            conditional_update(sample_usd_povm(), [0, 1])
            conditional_update(sample_usd_povm(math.pi / 4), [0, 1])

    def test_zero_effect_is_kept(self) -> None:
        """Test an outcome with a zero effect survives the update with a zero effect."""
        povm = validate_povm([np.diag([1, 0]), np.zeros((2, 2)), np.diag([0, 1])])
        updated = conditional_update(povm, [0, 1])
        self.assertEqual(("1", "2"), updated.labels)
        self.assertMatrixAlmostEqual(np.zeros((2, 2)), updated[1].matrix, tol=1e-14)

    def test_bad_cell(self) -> None:
        """Test empty, repeated and out of range cells are rejected."""
        for cell in ([], [0, 0], [3], [-1]):
            with self.subTest("Bad cell.", cell=cell):
                with self.assertRaises(ValidationError) as ctx:
                    conditional_update(sample_usd_povm(), cell)
                self.assertEqual("bad_cell", ctx.exception.code)


class TestGenerators(MatrixAssertionsMixin, TestCase):
    """Test the random generators."""

    def test_random_povm_is_valid(self) -> None:
        """Test random POVMs pass validation and are reproducible from the seed."""
        first = random_povm(np.random.default_rng(4), 3, 5, rank=1)
        second = random_povm(np.random.default_rng(4), 3, 5, rank=1)
        validate_povm(first.matrices)
        for a, b in zip(first, second):
            self.assertTrue(np.array_equal(a.matrix, b.matrix))

    def test_random_state_and_effect(self) -> None:
        """Test random states are density matrices and random effects have spectrum in [0, 1]."""
        rng = np.random.default_rng(5)
        for pure in (False, True):
            with self.subTest("Random state.", pure=pure):
                state = random_state(rng, 4, pure=pure)
                State.density(state.matrix)
                if pure:
                    self.assertAlmostEqual(1.0, float(np.real(np.trace(state.matrix @ state.matrix))), places=12)
        Effect.create(random_effect(rng, 4).matrix, "1")

    def test_outcome_probabilities(self) -> None:
        """Test `outcome_probabilities` of a projective measurement on a basis state."""
        self.assertEqual([0.0, 1.0, 0.0], outcome_probabilities(sample_projective_povm(3), State.pure([0, 1, 0])))
