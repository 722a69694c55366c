"""Random POVMs, states and effects for property tests and for the verification self-check."""

from typing import Optional
import numpy as np
from extensions.utilities.types import ComplexMatrix
from linalg.functions import pinv_sqrt
from linalg.matrices import as_matrix
from povm.measurement import default_labels
from povm.structures import Effect, Povm, State


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> ComplexMatrix:
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def haar_unitary(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    """Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's diagonal moved into Q."""
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    d = np.diag(r)
    return as_matrix(q * (d / np.abs(d)))


def random_povm(rng: np.random.Generator, dim: int, n: int, rank: Optional[int] = None) -> Povm:
    """
    Random `n`-outcome POVM on a `dim` dimensional space: Wishart matrices `G_j` of the given rank (full by default)
    normalized as `S^(-1/2) G_j S^(-1/2)` with `S = sum(G_j)`.
    """
    rank = dim if rank is None else rank
    if n * rank < dim:
        raise ValueError(f"{n} effects of rank {rank} cannot sum to the identity in dimension {dim}.")
    seeds = []
    for _ in range(n):
        g = _ginibre(rng, dim, rank)
        seeds.append(g @ g.conj().T)
    inverse_root = pinv_sqrt(sum(seeds))
    effects = tuple(
        Effect.clamped(inverse_root @ g @ inverse_root, label) for g, label in zip(seeds, default_labels(n))
    )
    return Povm(effects=effects, support=as_matrix(np.eye(dim)))


def random_state(rng: np.random.Generator, dim: int, pure: bool = False) -> State:
    """Random density matrix from the Ginibre ensemble, or a Haar random pure state."""
    if pure:
        return State.pure(_ginibre(rng, dim, 1))
    g = _ginibre(rng, dim, dim)
    rho = g @ g.conj().T
    return State(matrix=as_matrix(rho / np.real(np.trace(rho))))


def random_effect(rng: np.random.Generator, dim: int, label: str = "1") -> Effect:
    """Random effect: a Haar rotated diagonal with uniform eigenvalues in [0, 1]."""
    u = haar_unitary(rng, dim)
    return Effect.clamped((u * rng.uniform(size=dim)) @ u.conj().T, label)
