from __future__ import annotations
import json
import re
from pathlib import Path
from typing import TYPE_CHECKING, Optional
import numpy as np
import numpy.typing as npt
from django.core.exceptions import ValidationError
from extensions.utilities.types import JSON


if TYPE_CHECKING:
    from unittest import TestCase

    _Base = TestCase
else:
    _Base = object


class MatrixAssertionsMixin(_Base):
    """
    Mixin for `unittest.TestCase` classes that compare matrices and quantum states.

    ```py
    class TestSomething(MatrixAssertionsMixin, TestCase):
        def test_it(self) -> None:
            self.assertMatrixAlmostEqual(expected, actual, tol=1e-12)
    ```
    """

    def assertMatrixAlmostEqual(
        self, expected: npt.ArrayLike, actual: npt.ArrayLike, tol: float = 1e-10, msg: Optional[str] = None
    ) -> None:
        """Assert both arrays have the same shape and their Frobenius distance is below `tol`."""
        expected_arr = np.asarray(expected, dtype=complex)
        actual_arr = np.asarray(actual, dtype=complex)
        self.assertEqual(expected_arr.shape, actual_arr.shape, msg)
        distance = float(np.linalg.norm(expected_arr - actual_arr))
        self.assertLess(distance, tol, msg or f"Distance {distance:.3e} not below {tol:.1e}:\n{actual_arr}")

    def assertFidelityOne(
        self, expected: npt.ArrayLike, actual: npt.ArrayLike, tol: float = 1e-10, msg: Optional[str] = None
    ) -> None:
        """
        Assert two states are equal up to a global phase: vectors are promoted to projectors after normalization, then
        the density matrices are compared.
        """
        self.assertMatrixAlmostEqual(_as_density(expected), _as_density(actual), tol, msg)


def _as_density(state: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1 or (arr.ndim == 2 and arr.shape[1] == 1):
        vec = arr.reshape(-1)
        vec = vec / np.linalg.norm(vec)
        return np.outer(vec, vec.conj())
    return arr


def sample_json_file(folder: Path | str, data: JSON | str, name: str = "sample.json") -> Path:
    """
    Write `data` to a file in `folder` and return its path. Strings are written verbatim (to produce malformed
    documents), anything else is dumped as JSON.
    """
    path = Path(folder) / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def clear_colors(message: str) -> str:
    """Clear ANSI colors from a string."""
    # 7-bit C1 ANSI sequences
    ansi_escape = re.compile(
        r"""
        \x1B  # ESC
        (?:   # 7-bit C1 Fe (except CSI)
            [@-Z\\-_]
        |     # or [ for CSI, followed by a control sequence
            \[
            [0-?]*  # Parameter bytes
            [ -/]*  # Intermediate bytes
            [@-~]   # Final byte
        )
    """,
        re.VERBOSE,
    )
    return ansi_escape.sub("", message)


def error_codes(error: ValidationError) -> list[str]:
    """Codes of every error collected in a Django `ValidationError`, in order."""
    return [e.code or "" for e in error.error_list]
