from typing import Iterator
import numpy as np
from povm.generators import random_povm
from povm.structures import Povm
from sequential.tree import MeasurementTree, plan_binary_search, plan_outcome_decreasing


PLANNERS = {"outcome-decreasing": plan_outcome_decreasing, "binary-search": plan_binary_search}


def random_povm_cases(seed: int, count: int, dims: tuple[int, ...] = (2, 3, 4), max_n: int = 8) -> Iterator[Povm]:
    """`count` random full rank POVMs with dimension in `dims` and between 3 and `max_n` outcomes."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_povm(rng, int(rng.choice(dims)), int(rng.integers(3, max_n + 1)))


def both_trees(povm: Povm) -> Iterator[tuple[str, MeasurementTree]]:
    for name, planner in PLANNERS.items():
        yield name, planner(povm)
