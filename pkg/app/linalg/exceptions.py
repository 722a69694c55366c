class LinalgError(ValueError):
    """Base class for the linear-algebra kernel errors. `code` is stable and safe to match on."""

    code = "linalg_error"


class InvalidMatrix(LinalgError):
    """The input is not a finite, non-empty two dimensional array."""

    code = "invalid_matrix"


class NotSquare(LinalgError):
    code = "not_square"


class NotHermitian(LinalgError):
    code = "not_hermitian"


class NotPSD(LinalgError):
    code = "not_psd"


class DimensionMismatch(LinalgError):
    code = "dim_mismatch"


class NotConverged(LinalgError):
    """The Jacobi sweeps did not reach the off-diagonal threshold within the allowed number of sweeps."""

    code = "not_converged"
