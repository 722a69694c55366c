"""
The two sequential realizations of the discrimination POVM.

- Conclusiveness first: measure `{A_1 + A_2, A_?}`, then `{P_+, P_-}` (the conditional update of `{A_1, A_2}`) if
  the result was conclusive.
- State first: measure `{A_1, A_2 + A_?}`, then the updated `{A'_2, A'_?}` if `1` did not happen.

Both circuits come out of the generic planners and are compared with the closed-form unitaries while they are built.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal
import numpy as np
import numpy.typing as npt
from dilation.coupling import CouplingCircuit, QubitFactorization, premeasurement_state, qubit_factorization
from extensions.utilities.types import ComplexMatrix
from linalg.matrices import frob_dist
from povm.structures import State
from sequential.execution import OutcomeReport, execute_exact
from sequential.tree import MeasurementTree, plan_binary_search, plan_outcome_decreasing
from usd.problem import UsdProblem, build_usd


logger = logging.getLogger(__name__)

CONCLUSIVENESS_FIRST = "conclusiveness-first"
STATE_FIRST = "state-first"
SCENARIOS = (CONCLUSIVENESS_FIRST, STATE_FIRST)

DISPLAY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class UsdScenario:
    """
    `circuits` and `factorizations` follow the preorder of the tree nodes. `display_residual` is the largest distance
    between the first node and its closed form: the squared first block columns, plus `U_B` where it is fixed.
    """

    kind: str
    problem: UsdProblem
    tree: MeasurementTree
    circuits: tuple[CouplingCircuit, ...]
    factorizations: tuple[QubitFactorization, ...]
    display_residual: float

    @property
    def omega(self) -> float:
        return self.problem.omega

    def execute(self, state: State) -> OutcomeReport:
        return execute_exact(self.tree, state)

    def distribution(self, state: State) -> dict[str, float]:
        """Exact probabilities of `1`, `2` and `?`."""
        return self.execute(state).distribution()

    def premeasurement(self, psi: npt.ArrayLike, frame: Literal["basis", "lab"] = "basis") -> ComplexMatrix:
        """Joint system and ancilla vector of the first node, right before its ancilla is read."""
        return premeasurement_state(self.circuits[0], psi, frame)


def _column_weights(columns: npt.ArrayLike) -> npt.NDArray[np.float64]:
    # Squared moduli, i.e. the eigenvalue weights `(λ, 1 - λ)`
    return np.abs(np.asarray(columns, dtype=complex)) ** 2


def _assemble(
    kind: str, problem: UsdProblem, tree: MeasurementTree, expected: dict[str, npt.ArrayLike]
) -> UsdScenario:
    circuits = tuple(node.circuit for node in tree.nodes())
    first = circuits[0]
    actual = [block[:, 0] for block in first.blocks]
    residual = frob_dist(_column_weights(actual), _column_weights(expected["columns"]))
    if "basis_change" in expected:
        residual = max(residual, frob_dist(first.basis_change, expected["basis_change"]))
    if residual > DISPLAY_TOLERANCE:
        logger.warning("%s circuit differs from its closed form by %.3e at ω = %.6f.", kind, residual, problem.omega)
    return UsdScenario(
        kind=kind,
        problem=problem,
        tree=tree,
        circuits=circuits,
        factorizations=tuple(qubit_factorization(circuit) for circuit in circuits),
        display_residual=residual,
    )


def scenario_conclusiveness_first(omega: float) -> UsdScenario:
    """
    First node `B = A_1 + A_2 = diag(tan²ω, 1)`: eigenvalues `(1, tan²ω)`, so the blocks start with `(1, 0)` (`V_0 =
    σ_z`) and `(tan ω, sqrt(1 - tan²ω))`. The eigenbasis is the computational one, swapped to sort the eigenvalues.
    """
    problem = build_usd(omega)
    t = math.tan(problem.omega)
    columns = [[1.0, 0.0], [t, math.sqrt(max(1 - t * t, 0.0))]]
    tree = plan_binary_search(problem.povm)
    return _assemble(CONCLUSIVENESS_FIRST, problem, tree, {"columns": columns})


def scenario_state_first(omega: float) -> UsdScenario:
    """
    First node `B = A_1`: `U_B = |0><psi_2⊥| + |1><psi_2|` with rows `(sin ω, cos ω)` and `(cos ω, -sin ω)`, blocks
    starting with `(1, sqrt(cos 2ω)) / (sqrt(2) cos ω)` and `(0, 1)`.
    """
    problem = build_usd(omega)
    c, s = math.cos(problem.omega), math.sin(problem.omega)
    root = math.sqrt(max(math.cos(2 * problem.omega), 0.0))
    expected = {
        "columns": [[1 / (math.sqrt(2) * c), root / (math.sqrt(2) * c)], [0.0, 1.0]],
        "basis_change": [[s, c], [c, -s]],
    }
    tree = plan_outcome_decreasing(problem.povm, order=(0, 1, 2))
    return _assemble(STATE_FIRST, problem, tree, expected)


SCENARIO_BUILDERS: dict[str, Callable[[float], UsdScenario]] = {
    CONCLUSIVENESS_FIRST: scenario_conclusiveness_first,
    STATE_FIRST: scenario_state_first,
}


def build_scenario(kind: str, omega: float) -> UsdScenario:
    try:
        builder = SCENARIO_BUILDERS[kind]
    except KeyError:
        raise ValueError(f"Unknown scenario '{kind}', expected one of {', '.join(SCENARIOS)}.") from None
    return builder(omega)
