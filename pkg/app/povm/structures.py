"""
Immutable value types for measurements: effects, POVMs, outcome partitions, states and Lüders branches.

All matrices are read-only `complex128` arrays, so every value here can be shared freely between threads.
"""

from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional
import numpy as np
import numpy.typing as npt
from django.conf import settings
from django.core.exceptions import ValidationError
from extensions.utilities.types import ComplexMatrix
from linalg.eigen import herm_eig
from linalg.exceptions import LinalgError
from linalg.functions import psd_sqrt
from linalg.matrices import as_matrix, as_vector, hermitian_part


@dataclass(frozen=True, eq=False)
class Effect:
    """A Hermitian matrix with spectrum in [0, 1], tagged with the name of the outcome it represents."""

    matrix: ComplexMatrix
    label: str

    @classmethod
    def create(cls, matrix: npt.ArrayLike, label: str, tol: Optional[float] = None, index: int = 0) -> Effect:
        """
        Validate `matrix` as an effect: Hermitian within `tol` and eigenvalues in `[-tol, 1 + tol]`. Eigenvalues that
        stray outside `[0, 1]` within the tolerance are clamped. Raises a `ValidationError` with code `not_effect`
        carrying `index` otherwise.
        """
        tol = settings.LINALG_TOLERANCE if tol is None else tol
        try:
            eig = herm_eig(matrix, tol)
        except LinalgError as e:
            raise ValidationError(
                "Effect %(index)s (%(label)s) is invalid: %(reason)s",
                code="not_effect",
                params={"index": index, "label": label, "reason": str(e)},
            ) from e
        lowest, highest = float(eig.eigenvalues[-1]), float(eig.eigenvalues[0])
        if lowest < -tol or highest > 1 + tol:
            raise ValidationError(
                "Effect %(index)s (%(label)s) has eigenvalues in [%(lowest).3e, %(highest).3e], outside [0, 1].",
                code="not_effect",
                params={"index": index, "label": label, "lowest": lowest, "highest": highest},
            )
        if lowest < 0 or highest > 1:
            return cls(matrix=eig.apply(np.clip(eig.eigenvalues, 0.0, 1.0)), label=label)
        return cls(matrix=hermitian_part(matrix, tol), label=label)

    @classmethod
    def clamped(cls, matrix: npt.ArrayLike, label: str) -> Effect:
        """Build an effect from a matrix known to be one up to rounding: symmetrize and clamp the spectrum."""
        mat = as_matrix(matrix)
        eig = herm_eig((mat + mat.conj().T) / 2)
        return cls(matrix=eig.apply(np.clip(eig.eigenvalues, 0.0, 1.0)), label=label)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @cached_property
    def sqrt(self) -> ComplexMatrix:
        """The positive square root, i.e. the Lüders operator of this outcome."""
        return psd_sqrt(self.matrix)


@dataclass(frozen=True, eq=False)
class Povm:
    """
    Ordered effects summing to `support`. For a POVM on the whole space `support` is the identity; the conditional
    update of a rank deficient coarse effect yields effects summing to the projector onto its range instead, in which
    case `rank_deficient` is set.
    """

    effects: tuple[Effect, ...]
    support: ComplexMatrix
    rank_deficient: bool = False

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(effect.label for effect in self.effects)

    @property
    def matrices(self) -> tuple[ComplexMatrix, ...]:
        return tuple(effect.matrix for effect in self.effects)

    def __len__(self) -> int:
        return len(self.effects)

    def __iter__(self) -> Iterator[Effect]:
        return iter(self.effects)

    def __getitem__(self, index: int) -> Effect:
        return self.effects[index]


@dataclass(frozen=True)
class Partition:
    """Disjoint, non-empty cells of outcome indices (0-based) whose union is every outcome of a POVM."""

    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def create(cls, cells: Iterable[Iterable[int]], n: int) -> Partition:
        """Validate `cells` as a partition of `range(n)`, raising a `ValidationError` with code `bad_partition`."""
        normalized = tuple(tuple(int(i) for i in cell) for cell in cells)
        flat = [i for cell in normalized for i in cell]
        if any(len(cell) == 0 for cell in normalized):
            raise ValidationError("Partition cells must not be empty.", code="bad_partition")
        if len(flat) != len(set(flat)):
            raise ValidationError("Partition cells must be disjoint.", code="bad_partition")
        if sorted(flat) != list(range(n)):
            raise ValidationError(
                "Partition must cover exactly the outcomes 0..%(last)s.", code="bad_partition", params={"last": n - 1}
            )
        return cls(cells=normalized)

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(cells=tuple((i,) for i in range(n)))

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True, eq=False)
class State:
    """A density matrix: Hermitian, positive-semidefinite, unit trace."""

    matrix: ComplexMatrix

    @classmethod
    def pure(cls, vector: npt.ArrayLike) -> State:
        """The projector onto a non-zero vector, normalized first."""
        try:
            vec = as_vector(vector)
        except LinalgError as e:
            raise ValidationError(
                "Invalid state vector: %(reason)s", code="not_state", params={"reason": str(e)}
            ) from e
        norm = float(np.linalg.norm(vec))
        if norm == 0:
            raise ValidationError("State vector must not be zero.", code="not_state")
        vec = vec / norm
        return cls(matrix=as_matrix(np.outer(vec, vec.conj())))

    @classmethod
    def density(cls, matrix: npt.ArrayLike, tol: Optional[float] = None) -> State:
        """Validate a density matrix, raising a `ValidationError` with code `not_state`."""
        tol = settings.LINALG_TOLERANCE if tol is None else tol
        try:
            eig = herm_eig(matrix, tol)
        except LinalgError as e:
            raise ValidationError(
                "Invalid density matrix: %(reason)s", code="not_state", params={"reason": str(e)}
            ) from e
        if float(eig.eigenvalues[-1]) < -tol:
            raise ValidationError("Density matrix is not positive-semidefinite.", code="not_state")
        trace = float(np.sum(eig.eigenvalues))
        if abs(trace - 1) > tol:
            raise ValidationError(
                "Density matrix has trace %(trace).12g, expected 1.", code="not_state", params={"trace": trace}
            )
        return cls(matrix=hermitian_part(matrix, tol))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class Branch:
    """
    One outcome of a Lüders instrument: the probability of the outcome and the normalized post-measurement state,
    which is `None` when the probability is below the null tolerance.
    """

    weight: float
    state: Optional[State]

    @property
    def is_null(self) -> bool:
        return self.state is None

