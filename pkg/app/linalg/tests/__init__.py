import numpy as np
from extensions.utilities.types import ComplexMatrix


def random_hermitian(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    """Random Hermitian matrix with Gaussian entries."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def random_psd(rng: np.random.Generator, dim: int, rank: int | None = None) -> ComplexMatrix:
    """Random positive-semidefinite matrix of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    return g @ g.conj().T
