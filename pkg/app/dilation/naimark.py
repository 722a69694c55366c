"""
The naive Naimark dilation `V = sum_i sqrt(F_i) ⊗ |i>` of an n-outcome POVM, its unitary extension, and the Peres
dimension count. This is the reference against which the single-ancilla coupling is compared.
"""

import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np
from django.core.exceptions import ValidationError
from extensions.utilities.types import ComplexMatrix
from linalg.functions import rank
from linalg.matrices import as_matrix, basis_vector, kron, projector
from povm.structures import Povm


logger = logging.getLogger(__name__)

GRAM_SCHMIDT_TOLERANCE = 1e-10
"""Candidate basis vectors whose residual after orthogonalization is shorter than this are skipped."""


@dataclass(frozen=True, eq=False)
class NaimarkDilation:
    """
    `isometry` maps the `d` dimensional system into `system ⊗ pointer` (dimension `n d`), `projectors[i]` is
    `I ⊗ |i><i|` and `unitary_extension` is a unitary whose columns `a n` (the `|a>|0>` inputs) are the isometry.
    """

    isometry: ComplexMatrix
    projectors: tuple[ComplexMatrix, ...]
    unitary_extension: ComplexMatrix

    @property
    def dim(self) -> int:
        return int(self.isometry.shape[1])

    @property
    def dilated_dim(self) -> int:
        return int(self.isometry.shape[0])

    def effect(self, index: int) -> ComplexMatrix:
        """`V† P_i V`, which reproduces the i-th effect."""
        return as_matrix(self.isometry.conj().T @ self.projectors[index] @ self.isometry)


def _complete_unitary(isometry: ComplexMatrix, n: int) -> ComplexMatrix:
    total, d = isometry.shape
    unitary = np.zeros((total, total), dtype=np.complex128)
    fixed = [a * n for a in range(d)]
    unitary[:, fixed] = isometry
    basis = [isometry[:, a] for a in range(d)]
    free = iter(k for k in range(total) if k % n != 0)
    for k in range(total):
        if len(basis) == total:
            break
        candidate = np.zeros(total, dtype=np.complex128)
        candidate[k] = 1
        # Two passes of classical Gram-Schmidt
        for _ in range(2):
            for vec in basis:
                candidate = candidate - np.vdot(vec, candidate) * vec
        norm = float(np.linalg.norm(candidate))
        if norm < GRAM_SCHMIDT_TOLERANCE:
            continue
        candidate = candidate / norm
        basis.append(candidate)
        unitary[:, next(free)] = candidate
    return as_matrix(unitary)


def naive_naimark(povm: Povm) -> NaimarkDilation:
    """Dilate `povm` into a projective measurement on `system ⊗ C^n`."""
    if povm.rank_deficient:
        raise ValidationError("Only POVMs summing to the identity can be dilated.", code="sum_not_identity")
    d, n = povm.dim, len(povm)
    isometry = as_matrix(sum(np.kron(effect.sqrt, basis_vector(n, i)) for i, effect in enumerate(povm)))
    projectors = tuple(kron(np.eye(d), projector(n, i)) for i in range(n))
    logger.debug("Naimark dilation of a %d-outcome POVM from dimension %d to %d.", n, d, n * d)
    return NaimarkDilation(isometry=isometry, projectors=projectors, unitary_extension=_complete_unitary(isometry, n))


def peres_dimension(povm: Povm, rank_tol: Optional[float] = None) -> int:
    """Smallest dilation dimension `sum_i rank(F_i)` reachable by a Peres-type construction."""
    return sum(rank(effect.matrix, rank_tol) for effect in povm)
