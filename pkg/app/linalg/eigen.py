"""
Hermitian eigendecomposition by cyclic complex Jacobi rotations.

Dimensions handled by this project stay small (a few dozen at most), where the Jacobi method is accurate, simple and
fully deterministic. Results are normalized so that two calls on the same input are bitwise equal:
- eigenvalues sorted in descending order (stable, so ties keep the sweep order);
- in each eigenvector, the first component with modulus above the phase tolerance is real and positive.
"""

import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np
import numpy.typing as npt
from django.conf import settings
from extensions.utilities.types import ComplexMatrix, RealVector
from linalg.exceptions import NotConverged
from linalg.matrices import as_matrix, hermitian_part


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HermEigResult:
    """Eigenvalues (descending) and a unitary matrix whose columns are the matching eigenvectors."""

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        """Return `U diag(λ) U†`."""
        vecs = self.eigenvectors
        return as_matrix((vecs * self.eigenvalues) @ vecs.conj().T)

    def apply(self, values: npt.ArrayLike) -> ComplexMatrix:
        """Return `U diag(values) U†`, i.e. a spectral function evaluated on the eigenvalues."""
        vecs = self.eigenvectors
        return as_matrix((vecs * np.asarray(values)) @ vecs.conj().T)


def _off_norm(matrix: npt.NDArray[np.complex128]) -> float:
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def _rotation(a_pp: float, a_qq: float, a_pq: complex) -> npt.NDArray[np.complex128]:
    """
    Unitary 2x2 `G` such that `G† [[a_pp, a_pq], [conj(a_pq), a_qq]] G` is diagonal. The phase of `a_pq` is removed
    first, leaving a real symmetric rotation.
    """
    r = abs(a_pq)
    phase = a_pq / r
    zeta = (a_qq - a_pp) / (2 * r)
    t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1 + zeta * zeta))
    c = 1 / np.sqrt(1 + t * t)
    s = t * c
    # diag(1, conj(phase)) followed by the real rotation [[c, s], [-s, c]]
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def _jacobi(matrix: npt.NDArray[np.complex128], max_sweeps: int, relative_off_norm: float) -> tuple:
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]
    vecs = np.eye(n, dtype=np.complex128)
    threshold = relative_off_norm * float(np.linalg.norm(a))
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= threshold:
            logger.debug("Jacobi converged after %d sweep(s) for dimension %d.", sweep, n)
            return np.real(np.diag(a)).copy(), vecs
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0:
                    continue
                g = _rotation(float(np.real(a[p, p])), float(np.real(a[q, q])), complex(a[p, q]))
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0
                a[p, p], a[q, q] = np.real(a[p, p]), np.real(a[q, q])
                vecs[:, cols] = vecs[:, cols] @ g
    raise NotConverged(f"Jacobi did not converge within {max_sweeps} sweeps (off-norm {_off_norm(a):.3e}).")


def _fix_phases(vecs: npt.NDArray[np.complex128], phase_tol: float) -> npt.NDArray[np.complex128]:
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        column = vecs[:, k]
        leading = np.flatnonzero(np.abs(column) > phase_tol)
        if leading.size == 0:
            continue
        pivot = column[leading[0]]
        vecs[:, k] = column * (np.conj(pivot) / abs(pivot))
        # Exactly real, so later comparisons against the convention are bitwise stable.
        vecs[leading[0], k] = abs(pivot)
    return vecs


def herm_eig(
    matrix: npt.ArrayLike,
    tol: Optional[float] = None,
    phase_tol: Optional[float] = None,
) -> HermEigResult:
    """
    Diagonalize a Hermitian matrix.

    Raises `NotSquare` or `NotHermitian` (`||M - M†||_F > tol`) for invalid inputs, and `NotConverged` when the Jacobi
    sweeps exhaust `LINALG_JACOBI_MAX_SWEEPS`.
    """
    phase_tol = settings.LINALG_PHASE_TOLERANCE if phase_tol is None else phase_tol
    hermitian = hermitian_part(matrix, tol)
    values, vecs = _jacobi(hermitian, settings.LINALG_JACOBI_MAX_SWEEPS, settings.LINALG_JACOBI_RELATIVE_OFF_NORM)
    order = np.argsort(-values, kind="stable")
    eigenvalues = values[order]
    eigenvalues.setflags(write=False)
    return HermEigResult(eigenvalues=eigenvalues, eigenvectors=as_matrix(_fix_phases(vecs[:, order], phase_tol)))
