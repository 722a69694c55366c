"""POVM validation, Born probabilities, the Lüders instrument, coarse-graining and the conditional update."""

import logging
from typing import Iterable, Optional, Sequence
import numpy as np
import numpy.typing as npt
from django.conf import settings
from django.core.exceptions import ValidationError
from linalg.exceptions import DimensionMismatch, LinalgError
from linalg.functions import pinv_sqrt, range_projector, rank
from linalg.matrices import as_matrix
from povm.structures import Branch, Effect, Partition, Povm, State


logger = logging.getLogger(__name__)


def default_labels(n: int) -> list[str]:
    """Outcome labels `"1"`, ..., `"n"`."""
    return [str(i + 1) for i in range(n)]


def validate_povm(
    matrices: Sequence[npt.ArrayLike],
    labels: Optional[Sequence[str]] = None,
    tol: Optional[float] = None,
    dim: Optional[int] = None,
) -> Povm:
    """
    Validate a list of matrices as a POVM on the whole space.

    Shape problems (`empty_list`, `dim_mismatch`) are raised straight away; otherwise every failing effect
    (`not_effect`, with its index) and the identity-sum residual (`sum_not_identity`) are collected into a single
    `ValidationError`.
    """
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    if len(matrices) == 0:
        raise ValidationError("A POVM needs at least one effect.", code="empty_list")
    labels = default_labels(len(matrices)) if labels is None else list(labels)
    if len(labels) != len(matrices):
        raise ValidationError(
            "Got %(labels)s labels for %(effects)s effects.",
            code="dim_mismatch",
            params={"labels": len(labels), "effects": len(matrices)},
        )

    converted = []
    for index, matrix in enumerate(matrices):
        try:
            converted.append(as_matrix(matrix))
        except LinalgError as e:
            raise ValidationError(
                "Effect %(index)s is not a matrix: %(reason)s",
                code="not_effect",
                params={"index": index, "reason": str(e)},
            ) from e
    shapes = {m.shape for m in converted}
    expected = (dim, dim) if dim is not None else converted[0].shape
    if len(shapes) > 1 or expected not in shapes or expected[0] != expected[1]:
        raise ValidationError(
            "Effects must be square matrices of one common dimension, got shapes %(shapes)s.",
            code="dim_mismatch",
            params={"shapes": sorted(shapes)},
        )

    errors: list[ValidationError] = []
    effects: list[Effect] = []
    for index, (matrix, label) in enumerate(zip(converted, labels)):
        try:
            effects.append(Effect.create(matrix, label, tol, index=index))
        except ValidationError as e:
            errors.append(e)
    n = expected[0]
    residual = float(np.linalg.norm(sum(converted) - np.eye(n)))
    if residual > tol:
        errors.append(
            ValidationError(
                "Effects sum to the identity only within %(residual).3e.",
                code="sum_not_identity",
                params={"residual": residual},
            )
        )
    if errors:
        raise ValidationError(errors)
    logger.debug("Validated a %d-outcome POVM in dimension %d (residual %.3e).", len(effects), n, residual)
    return Povm(effects=tuple(effects), support=as_matrix(np.eye(n)))


def _check_dims(effect: Effect, state: State) -> None:
    if effect.dim != state.dim:
        raise DimensionMismatch(f"Effect has dimension {effect.dim} but the state has dimension {state.dim}.")


def born_probability(effect: Effect, state: State) -> float:
    """`tr(A ρ)`, clamped into [0, 1]."""
    _check_dims(effect, state)
    return float(np.clip(np.real(np.trace(effect.matrix @ state.matrix)), 0.0, 1.0))


def outcome_probabilities(povm: Povm, state: State) -> list[float]:
    return [born_probability(effect, state) for effect in povm]


def lueders_branch(effect: Effect, state: State, null_tol: Optional[float] = None) -> Branch:
    """
    Apply the Lüders instrument of one outcome: weight `tr(A ρ)` and post-measurement state
    `A^(1/2) ρ A^(1/2) / weight`. Branches lighter than `null_tol` carry no state.
    """
    null_tol = settings.POVM_NULL_TOLERANCE if null_tol is None else null_tol
    weight = born_probability(effect, state)
    if weight < null_tol:
        return Branch(weight=weight, state=None)
    root = effect.sqrt
    post = root @ state.matrix @ root / weight
    return Branch(weight=weight, state=State(matrix=as_matrix((post + post.conj().T) / 2)))


def lueders_instrument(povm: Povm, state: State, null_tol: Optional[float] = None) -> list[Branch]:
    """One branch per outcome of `povm`."""
    return [lueders_branch(effect, state, null_tol) for effect in povm]


def coarse_grain(povm: Povm, partition: Partition | Iterable[Iterable[int]]) -> Povm:
    """
    Merge outcomes: the k-th effect of the result is the sum of the effects in the k-th cell, labelled with the member
    labels joined by `+`.
    """
    if not isinstance(partition, Partition):
        partition = Partition.create(partition, len(povm))
    elif sorted(i for cell in partition.cells for i in cell) != list(range(len(povm))):
        raise ValidationError(
            "Partition does not match a %(n)s-outcome POVM.", code="bad_partition", params={"n": len(povm)}
        )
    effects = tuple(
        Effect.clamped(sum(povm[i].matrix for i in cell), "+".join(povm[i].label for i in cell))
        for cell in partition.cells
    )
    return Povm(effects=effects, support=povm.support, rank_deficient=povm.rank_deficient)


def validate_cell(cell: Iterable[int], n: int) -> tuple[int, ...]:
    """Check `cell` is a non-empty set of distinct outcome indices below `n`, raising `bad_cell` otherwise."""
    normalized = tuple(int(i) for i in cell)
    if not normalized or len(set(normalized)) != len(normalized) or not all(0 <= i < n for i in normalized):
        raise ValidationError(
            "Cell %(cell)s is not a non-empty set of outcomes of a %(n)s-outcome POVM.",
            code="bad_cell",
            params={"cell": list(normalized), "n": n},
        )
    return normalized


def conditional_update(
    povm: Povm, cell: Iterable[int], rank_tol: Optional[float] = None, tol: Optional[float] = None
) -> Povm:
    """
    The measurement to perform after a Lüders measurement of `B = sum(A_j for j in cell)` has clicked: the effects
    `B^(-1/2) A_j B^(-1/2)` for `j` in `cell`, in cell order, using the pseudoinverse on the range of `B`.

    The result lives in the full space and sums to the projector onto the range of `B`, stored as its `support`.
    Outcomes whose updated effect vanishes are kept with a zero effect.
    """
    indices = validate_cell(cell, len(povm))
    coarse = sum(povm[i].matrix for i in indices)
    inverse_root = pinv_sqrt(coarse, rank_tol, tol)
    effects = tuple(Effect.clamped(inverse_root @ povm[i].matrix @ inverse_root, povm[i].label) for i in indices)
    support = range_projector(coarse, rank_tol, tol)
    support_rank = rank(coarse, rank_tol, tol)
    deficient = support_rank < povm.dim
    support_dim = round(float(np.real(np.trace(povm.support))))
    if support_rank < support_dim:
        logger.debug(
            "Coarse effect of outcomes %s has rank %d < %d; the update is restricted to its range.",
            ",".join(povm[i].label for i in indices),
            support_rank,
            support_dim,
        )
    return Povm(effects=effects, support=support, rank_deficient=deficient)
