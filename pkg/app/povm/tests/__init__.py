import math
import numpy as np
from extensions.utilities.types import ComplexMatrix
from povm.measurement import validate_povm
from povm.structures import Povm, State


OMEGA = 0.4
"""Half-angle between the two discriminated states used throughout the tests."""


def usd_states(omega: float = OMEGA) -> tuple[State, State]:
    """`cos ω|0> ± sin ω|1>`."""
    return (
        State.pure([math.cos(omega), math.sin(omega)]),
        State.pure([math.cos(omega), -math.sin(omega)]),
    )


def usd_matrices(omega: float = OMEGA) -> list[ComplexMatrix]:
    """The optimal discrimination effects `[A_1, A_2, A_?]`, written out explicitly."""
    t = math.tan(omega)
    a1 = 0.5 * np.array([[t * t, t], [t, 1.0]], dtype=complex)
    a2 = 0.5 * np.array([[t * t, -t], [-t, 1.0]], dtype=complex)
    return [a1, a2, np.diag([1 - t * t, 0.0]).astype(complex)]


def sample_usd_povm(omega: float = OMEGA) -> Povm:
    return validate_povm(usd_matrices(omega), labels=["1", "2", "?"])


def sample_projective_povm(dim: int = 2) -> Povm:
    """Computational basis measurement with labels `"0"`, ..., `"dim-1"`."""
    return validate_povm([np.diag(np.eye(dim)[i]) for i in range(dim)], labels=[str(i) for i in range(dim)])


def trine_matrices() -> list[ComplexMatrix]:
    """`(2/3)|φ_k><φ_k|` for three real vectors 120 degrees apart."""
    matrices = []
    for k in range(3):
        phi = np.array([math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3)])
        matrices.append(2 / 3 * np.outer(phi, phi).astype(complex))
    return matrices
