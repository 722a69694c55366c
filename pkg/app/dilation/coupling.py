"""
Single-ancilla realization of a two-outcome Lüders measurement `{B, I - B}`.

The system is rotated into the eigenbasis of `B` by `U_B`, then a block-diagonal unitary `V = sum_j |j><j| ⊗ V_j`
couples each eigenvector to the ancilla qubit, and the ancilla is measured: outcome 0 means `B` happened. Only the
first column of every block is fixed, `(sqrt(λ_j), sqrt(1 - λ_j))`; the default completion is
`[[sqrt(λ), sqrt(1 - λ)], [sqrt(1 - λ), -sqrt(λ)]]`, and `recomplete` gives the others.

Tensor order is `system ⊗ ancilla` (system slow) everywhere.
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Literal, Optional, Sequence
import numpy as np
import numpy.typing as npt
from django.conf import settings
from django.core.exceptions import ValidationError
from extensions.utilities.types import ComplexMatrix, RealVector
from linalg.eigen import herm_eig
from linalg.exceptions import DimensionMismatch
from linalg.matrices import as_matrix, as_vector, basis_vector, kron, partial_trace_ancilla, projector
from povm.structures import Branch, Effect, State


logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def coupling_block(lam: float) -> ComplexMatrix:
    """`[[sqrt(λ), sqrt(1 - λ)], [sqrt(1 - λ), -sqrt(λ)]]`: real, symmetric and unitary for every λ in [0, 1]."""
    lam = min(max(float(lam), 0.0), 1.0)
    yes, no = math.sqrt(lam), math.sqrt(1 - lam)
    return as_matrix([[yes, no], [no, -yes]])


@dataclass(frozen=True, eq=False)
class QubitFactorization:
    """`V = (|0><0| ⊗ I + |1><1| ⊗ W)(I ⊗ V_0)`: an ancilla rotation, then `W = V_1 V_0†` controlled by the system."""

    pre_rotation: ComplexMatrix
    controlled_gate: ComplexMatrix

    def reassemble(self) -> ComplexMatrix:
        controlled = kron(projector(2, 0), np.eye(2)) + kron(projector(2, 1), self.controlled_gate)
        return as_matrix(controlled @ kron(np.eye(2), self.pre_rotation))


@dataclass(frozen=True, eq=False)
class CouplingCircuit:
    """
    Circuit measuring `{effect, I - effect}`: `basis_change` is `U_B` (rows are the eigenvectors of the effect, so
    `U_B B U_B† = diag(eigenvalues)`), `blocks[j]` is the ancilla unitary applied when the system is in `|j>`.
    """

    effect: Effect
    basis_change: ComplexMatrix
    eigenvalues: RealVector
    blocks: tuple[ComplexMatrix, ...]

    @property
    def dim(self) -> int:
        return int(self.basis_change.shape[0])

    @cached_property
    def coupling_unitary(self) -> ComplexMatrix:
        """`V = sum_j |j><j| ⊗ V_j`, acting in the eigenbasis of the effect."""
        return as_matrix(sum(np.kron(projector(self.dim, j), block) for j, block in enumerate(self.blocks)))

    @cached_property
    def full_unitary(self) -> ComplexMatrix:
        """`(U_B† ⊗ I) V (U_B ⊗ I)`, the whole circuit in the lab frame."""
        rotation = np.kron(self.basis_change, np.eye(2))
        return as_matrix(rotation.conj().T @ self.coupling_unitary @ rotation)


def coupling_circuit(effect: Effect | npt.ArrayLike, tol: Optional[float] = None) -> CouplingCircuit:
    """
    Build the coupling circuit of a two-outcome measurement `{B, I - B}` of any dimension. `U_B` follows the
    eigendecomposition conventions (descending eigenvalues, fixed phases), so the circuit is deterministic.
    """
    if not isinstance(effect, Effect):
        effect = Effect.create(effect, "B", tol)
    eig = herm_eig(effect.matrix, tol)
    eigenvalues = np.clip(eig.eigenvalues, 0.0, 1.0)
    eigenvalues.setflags(write=False)
    logger.debug("Coupling circuit for eigenvalues %s.", np.array2string(eigenvalues, precision=6))
    return CouplingCircuit(
        effect=effect,
        basis_change=as_matrix(eig.eigenvectors.conj().T),
        eigenvalues=eigenvalues,
        blocks=tuple(coupling_block(lam) for lam in eigenvalues),
    )


def recomplete(circuit: CouplingCircuit, phases: complex | Sequence[complex]) -> CouplingCircuit:
    """
    Another valid completion of the same circuit: the second column of block `j` is multiplied by the unit-modulus
    `phases[j]` (one phase for every block when a scalar is given). `phases=-1` turns the `λ = 0` block `σ_x` into
    `-iσ_y`.
    """
    values = np.broadcast_to(np.asarray(phases, dtype=np.complex128), (len(circuit.blocks),))
    if not np.allclose(np.abs(values), 1.0, rtol=0, atol=1e-12):
        raise ValueError("Completion phases must have modulus 1.")
    blocks = tuple(as_matrix(block * np.array([1, phase])) for block, phase in zip(circuit.blocks, values))
    return replace(circuit, blocks=blocks)


def appendix_completion(alpha: float, a: float, tol: Optional[float] = None) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    Blocks `(V_0, V_1)` of the qubit effect `(α I + a·σ)/2`, whose eigenvalues are `(α + a)/2` and `(α - a)/2`.
    Both use the sign pattern of `coupling_block`. Raises `not_effect_params` unless both eigenvalues are in [0, 1].
    """
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    upper, lower = (alpha + a) / 2, (alpha - a) / 2
    if a < -tol or lower < -tol or upper > 1 + tol or not (math.isfinite(alpha) and math.isfinite(a)):
        raise ValidationError(
            "(α, a) = (%(alpha)s, %(a)s) do not describe an effect.",
            code="not_effect_params",
            params={"alpha": alpha, "a": a},
        )
    return coupling_block(upper), coupling_block(lower)


@dataclass(frozen=True)
class BlochParameters:
    """`A = (α I + a·σ)/2`, with `vector` the Bloch vector `a`."""

    alpha: float
    vector: tuple[float, float, float]

    @property
    def a(self) -> float:
        return float(np.linalg.norm(self.vector))


def _require_qubit(dim: int) -> None:
    if dim != 2:
        raise ValidationError("Expected a qubit, got dimension %(dim)s.", code="dim_not_two", params={"dim": dim})


def bloch_parameters(effect: Effect) -> BlochParameters:
    _require_qubit(effect.dim)
    alpha = float(np.real(np.trace(effect.matrix)))
    vector = tuple(float(np.real(np.trace(effect.matrix @ sigma))) for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    return BlochParameters(alpha=alpha, vector=(vector[0], vector[1], vector[2]))


def qubit_factorization(circuit: CouplingCircuit) -> QubitFactorization:
    """Split the coupling of a qubit effect into `V_0` on the ancilla and the controlled `V_1 V_0†`."""
    _require_qubit(circuit.dim)
    v0, v1 = circuit.blocks
    return QubitFactorization(pre_rotation=v0, controlled_gate=as_matrix(v1 @ v0.conj().T))


def apply_coupling(circuit: CouplingCircuit, state: State, null_tol: Optional[float] = None) -> tuple[Branch, Branch]:
    """
    Run the circuit on `ρ ⊗ |0><0|`, measure the ancilla and trace it out. The first branch is ancilla outcome 0
    (the effect happened), the second one outcome 1.
    """
    null_tol = settings.POVM_NULL_TOLERANCE if null_tol is None else null_tol
    if state.dim != circuit.dim:
        raise DimensionMismatch(f"Circuit has dimension {circuit.dim} but the state has dimension {state.dim}.")
    u = circuit.full_unitary
    evolved = u @ np.kron(state.matrix, projector(2, 0)) @ u.conj().T
    branches = []
    for outcome in (0, 1):
        pointer = np.kron(np.eye(circuit.dim), projector(2, outcome))
        reduced = partial_trace_ancilla(pointer @ evolved @ pointer, circuit.dim)
        weight = float(np.clip(np.real(np.trace(reduced)), 0.0, 1.0))
        if weight < null_tol:
            branches.append(Branch(weight=weight, state=None))
            continue
        post = reduced / weight
        branches.append(Branch(weight=weight, state=State(matrix=as_matrix((post + post.conj().T) / 2))))
    return branches[0], branches[1]


def premeasurement_state(
    circuit: CouplingCircuit, psi: npt.ArrayLike, frame: Literal["basis", "lab"] = "basis"
) -> ComplexMatrix:
    """
    Joint `system ⊗ ancilla` vector right before the ancilla is measured, for a pure input `psi` (normalized first).
    In the `"basis"` frame the system is left in the eigenbasis of the effect, `V (U_B psi ⊗ |0>)`; the `"lab"` frame
    rotates it back.
    """
    vec = as_vector(psi)
    if vec.size != circuit.dim:
        raise DimensionMismatch(f"Circuit has dimension {circuit.dim} but the state has dimension {vec.size}.")
    vec = vec / np.linalg.norm(vec)
    ancilla = basis_vector(2, 0).reshape(-1)
    if frame == "basis":
        joint = circuit.coupling_unitary @ np.kron(circuit.basis_change @ vec, ancilla)
    elif frame == "lab":
        joint = circuit.full_unitary @ np.kron(vec, ancilla)
    else:
        raise ValueError(f"Unknown frame '{frame}'.")
    joint.setflags(write=False)
    return joint
