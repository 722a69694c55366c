"""
Small dense-matrix helpers shared by every app.

Matrices are `complex128` numpy arrays. Tensor products always put the first factor on the slow index, so
`kron(system_operator, ancilla_operator)` acts on `system ⊗ ancilla`.
"""

from typing import Optional
import numpy as np
import numpy.typing as npt
from django.conf import settings
from extensions.utilities.types import ComplexMatrix
from linalg.exceptions import DimensionMismatch, InvalidMatrix, NotHermitian, NotSquare


def as_matrix(data: npt.ArrayLike) -> ComplexMatrix:
    """
    Convert `data` into a read-only `complex128` matrix. Raises `InvalidMatrix` unless the result is two dimensional,
    has at least one row and column, and all of its entries are finite.
    """
    try:
        matrix = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix(f"Cannot interpret input as a complex matrix: {e}") from e
    if matrix.ndim != 2:
        raise InvalidMatrix(f"Expected a two dimensional array, got {matrix.ndim} dimension(s).")
    if matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise InvalidMatrix(f"Matrix must have at least one row and one column, got shape {matrix.shape}.")
    if not np.all(np.isfinite(matrix)):
        raise InvalidMatrix("Matrix has NaN or infinite entries.")
    matrix.setflags(write=False)
    return matrix


def as_vector(data: npt.ArrayLike) -> ComplexMatrix:
    """Convert `data` into a read-only one dimensional `complex128` array with finite entries."""
    vector = np.array(data, dtype=np.complex128).reshape(-1)
    if vector.size < 1 or not np.all(np.isfinite(vector)):
        raise InvalidMatrix("Vector must be non-empty with finite entries.")
    vector.setflags(write=False)
    return vector


def require_square(matrix: ComplexMatrix) -> int:
    """Return the dimension of a square matrix, raising `NotSquare` otherwise."""
    rows, cols = matrix.shape
    if rows != cols:
        raise NotSquare(f"Expected a square matrix, got shape {matrix.shape}.")
    return int(rows)


def require_same_shape(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"Shapes {a.shape} and {b.shape} do not match.")


def dagger(matrix: npt.ArrayLike) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_matrix(np.conj(as_matrix(matrix)).T)


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Tensor product with `a` as the slow (first) factor."""
    return as_matrix(np.kron(as_matrix(a), as_matrix(b)))


def frob_dist(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Frobenius norm of `a - b`."""
    a_mat, b_mat = as_matrix(a), as_matrix(b)
    require_same_shape(a_mat, b_mat)
    return float(np.linalg.norm(a_mat - b_mat))


def hermiticity_residual(matrix: ComplexMatrix) -> float:
    """Frobenius norm of `M - M†`."""
    return float(np.linalg.norm(matrix - matrix.conj().T))


def is_hermitian(matrix: npt.ArrayLike, tol: Optional[float] = None) -> bool:
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    mat = as_matrix(matrix)
    return mat.shape[0] == mat.shape[1] and hermiticity_residual(mat) <= tol


def is_unitary(matrix: npt.ArrayLike, tol: Optional[float] = None) -> bool:
    """True when `M†M` is the identity within `tol` (Frobenius norm)."""
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    mat = as_matrix(matrix)
    if mat.shape[0] != mat.shape[1]:
        return False
    return float(np.linalg.norm(mat.conj().T @ mat - np.eye(mat.shape[0]))) <= tol


def hermitian_part(matrix: npt.ArrayLike, tol: Optional[float] = None) -> ComplexMatrix:
    """
    Validate that `matrix` is square and Hermitian within `tol`, and return `(M + M†) / 2` so that downstream code
    works on an exactly Hermitian matrix.
    """
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    mat = as_matrix(matrix)
    require_square(mat)
    residual = hermiticity_residual(mat)
    if residual > tol:
        raise NotHermitian(f"Matrix is not Hermitian: ||M - M†||_F = {residual:.3e} > {tol:.1e}.")
    return as_matrix((mat + mat.conj().T) / 2)


def basis_vector(dim: int, index: int) -> ComplexMatrix:
    """Column vector |index> in a `dim` dimensional space, shaped `(dim, 1)`."""
    vec = np.zeros((dim, 1), dtype=np.complex128)
    vec[index, 0] = 1
    return as_matrix(vec)


def projector(dim: int, index: int) -> ComplexMatrix:
    """|index><index| in a `dim` dimensional space."""
    vec = basis_vector(dim, index)
    return as_matrix(vec @ vec.conj().T)


def partial_trace_ancilla(matrix: npt.ArrayLike, system_dim: int, ancilla_dim: int = 2) -> ComplexMatrix:
    """Trace out the fast (second) tensor factor of an operator on `system ⊗ ancilla`."""
    mat = as_matrix(matrix)
    expected = system_dim * ancilla_dim
    if mat.shape != (expected, expected):
        raise DimensionMismatch(f"Expected shape {(expected, expected)}, got {mat.shape}.")
    reshaped = mat.reshape(system_dim, ancilla_dim, system_dim, ancilla_dim)
    return as_matrix(np.einsum("ikjk->ij", reshaped))


def _is_vector(arr: npt.NDArray[np.complex128]) -> bool:
    return arr.ndim == 1 or (arr.ndim == 2 and arr.shape[1] == 1)


def state_fidelity(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """
    Fidelity between two states of which at least one is pure. For a pure `a` this is `<a|b|a>` (or `|<a|b>|^2` when
    `b` is a vector too), so global phases are ignored. Two density matrices are compared as `tr(ab)`, which is only
    the fidelity when one of them is a projector.
    """
    a_arr, b_arr = np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)
    if not _is_vector(a_arr) and _is_vector(b_arr):
        a_arr, b_arr = b_arr, a_arr
    if not _is_vector(a_arr):
        return float(np.real(np.trace(a_arr @ b_arr)))
    vec = a_arr.reshape(-1) / np.linalg.norm(a_arr)
    if _is_vector(b_arr):
        other = b_arr.reshape(-1) / np.linalg.norm(b_arr)
        return float(abs(np.vdot(vec, other)) ** 2)
    return float(np.real(np.vdot(vec, b_arr @ vec)))
