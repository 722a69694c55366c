"""Spectral functions of positive-semidefinite matrices: square roots, pseudoinverse square roots, ranges and ranks."""

from typing import Optional
import numpy as np
import numpy.typing as npt
from django.conf import settings
from extensions.utilities.types import ComplexMatrix, RealVector
from linalg.eigen import HermEigResult, herm_eig
from linalg.exceptions import NotPSD


def psd_eig(matrix: npt.ArrayLike, tol: Optional[float] = None) -> HermEigResult:
    """
    Diagonalize a positive-semidefinite matrix. Eigenvalues in `[-tol, 0)` are clamped to 0; anything below `-tol`
    raises `NotPSD`.
    """
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    eig = herm_eig(matrix, tol)
    if eig.eigenvalues.size and eig.eigenvalues[-1] < -tol:
        raise NotPSD(f"Matrix has eigenvalue {eig.eigenvalues[-1]:.3e} < -{tol:.1e}.")
    clamped = np.clip(eig.eigenvalues, 0.0, None)
    clamped.setflags(write=False)
    return HermEigResult(eigenvalues=clamped, eigenvectors=eig.eigenvectors)


def _support_mask(eigenvalues: RealVector, rank_tol: float) -> npt.NDArray[np.bool_]:
    largest = float(eigenvalues[0]) if eigenvalues.size else 0.0
    if largest <= 0:
        return np.zeros(eigenvalues.shape, dtype=bool)
    return eigenvalues > rank_tol * largest


def psd_sqrt(matrix: npt.ArrayLike, tol: Optional[float] = None) -> ComplexMatrix:
    """The unique positive-semidefinite square root `S` with `S @ S == M`."""
    eig = psd_eig(matrix, tol)
    return eig.apply(np.sqrt(eig.eigenvalues))


def pinv_sqrt(matrix: npt.ArrayLike, rank_tol: Optional[float] = None, tol: Optional[float] = None) -> ComplexMatrix:
    """
    Moore-Penrose pseudoinverse of `M^(1/2)`: eigenvalues above `rank_tol * λ_max` map to `λ^(-1/2)`, all others to 0.
    `M^(1/2) @ pinv_sqrt(M)` is then the projector onto the range of `M`.
    """
    rank_tol = settings.LINALG_RANK_TOLERANCE if rank_tol is None else rank_tol
    eig = psd_eig(matrix, tol)
    mask = _support_mask(eig.eigenvalues, rank_tol)
    inverted = np.zeros_like(eig.eigenvalues)
    inverted[mask] = 1 / np.sqrt(eig.eigenvalues[mask])
    return eig.apply(inverted)


def range_projector(
    matrix: npt.ArrayLike, rank_tol: Optional[float] = None, tol: Optional[float] = None
) -> ComplexMatrix:
    """Orthogonal projector onto the range of a positive-semidefinite matrix."""
    rank_tol = settings.LINALG_RANK_TOLERANCE if rank_tol is None else rank_tol
    eig = psd_eig(matrix, tol)
    return eig.apply(_support_mask(eig.eigenvalues, rank_tol).astype(float))


def rank(matrix: npt.ArrayLike, rank_tol: Optional[float] = None, tol: Optional[float] = None) -> int:
    """Number of eigenvalues above `rank_tol * λ_max`."""
    rank_tol = settings.LINALG_RANK_TOLERANCE if rank_tol is None else rank_tol
    eig = psd_eig(matrix, tol)
    return int(np.count_nonzero(_support_mask(eig.eigenvalues, rank_tol)))
