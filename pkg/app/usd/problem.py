"""
Optimal unambiguous discrimination of `|psi_1,2> = cos ω|0> ± sin ω|1>`, given with equal priors.

The optimal POVM is `A_1 = λ P_2⊥`, `A_2 = λ P_1⊥` and `A_? = I - A_1 - A_2` with `λ = 1 / (2 cos²ω)`, the largest
value keeping `A_?` positive. Outcome `1` never happens on `psi_2` and `2` never on `psi_1`.
"""

import logging
import math
from dataclasses import dataclass
import numpy as np
from django.core.exceptions import ValidationError
from extensions.utilities.types import ComplexMatrix
from linalg.matrices import as_vector
from povm.measurement import validate_povm
from povm.structures import Povm, State


logger = logging.getLogger(__name__)

OMEGA_SLACK = 1e-12
"""Angles up to this far above `π/4` are read as `π/4`."""

LABELS = ("1", "2", "?")


def validate_omega(omega: float) -> float:
    """Check `0 < ω <= π/4`, raising `omega_out_of_range` otherwise."""
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0 or omega > math.pi / 4 + OMEGA_SLACK:
        raise ValidationError("ω = %(omega)s is outside (0, π/4].", code="omega_out_of_range", params={"omega": omega})
    return min(omega, math.pi / 4)


@dataclass(frozen=True, eq=False)
class UsdProblem:
    omega: float
    lam: float
    states: tuple[ComplexMatrix, ComplexMatrix]
    perps: tuple[ComplexMatrix, ComplexMatrix]
    povm: Povm

    def input_state(self, index: int) -> State:
        """`psi_1` for index 0 and `psi_2` for index 1."""
        return State.pure(self.states[index])

    @property
    def inputs(self) -> dict[str, State]:
        return {"psi1": self.input_state(0), "psi2": self.input_state(1)}


def build_usd(omega: float) -> UsdProblem:
    omega = validate_omega(omega)
    c, s = math.cos(omega), math.sin(omega)
    lam = 1 / (2 * c * c)
    states = (as_vector([c, s]), as_vector([c, -s]))
    perps = (as_vector([s, -c]), as_vector([s, c]))
    a1 = lam * np.outer(perps[1], perps[1].conj())
    a2 = lam * np.outer(perps[0], perps[0].conj())
    povm = validate_povm([a1, a2, np.eye(2) - a1 - a2], labels=LABELS)
    logger.debug("Discrimination POVM for ω = %.6f (λ = %.6f).", omega, lam)
    return UsdProblem(omega=omega, lam=lam, states=states, perps=perps, povm=povm)


def inconclusive_probability(omega: float) -> float:
    """`p_? = cos 2ω`, the same for both inputs."""
    return math.cos(2 * validate_omega(omega))


def conclusive_probability(omega: float) -> float:
    """`p_! = 1 - p_? = 2 sin²ω`."""
    return 2 * math.sin(validate_omega(omega)) ** 2
