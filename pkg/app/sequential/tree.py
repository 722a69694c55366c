"""
Measurement trees: an n-outcome POVM realized as nested two-outcome Lüders measurements `{B, I - B}`.

Every node measures the coarse effect `B` of the outcomes routed to its `child_in` branch, with the effects already
updated (`povm.measurement.conditional_update`) by every measurement above it. Leaves hold one original outcome.
"""

from __future__ import annotations
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence
import numpy as np
from django.core.exceptions import ValidationError
from dilation.coupling import CouplingCircuit, coupling_circuit
from extensions.utilities.types import ComplexMatrix
from linalg.matrices import as_matrix, frob_dist
from povm.measurement import conditional_update
from povm.structures import Effect, Povm


logger = logging.getLogger(__name__)

CONSISTENCY_TOLERANCE = 1e-8
"""Nodes whose propagated effect deviates more than this from the sum of their original effects are logged."""

OUTCOME_DECREASING = "outcome-decreasing"
BINARY_SEARCH = "binary-search"
STRATEGIES = (OUTCOME_DECREASING, BINARY_SEARCH)

Splitter = Callable[[tuple[int, ...]], int]
"""Given the outcomes of a node (in planning order), how many leading ones go to the `child_in` branch."""


@dataclass(frozen=True)
class Leaf:
    index: int
    label: str


@dataclass(frozen=True, eq=False)
class TreeNode:
    """
    `cell` lists the original outcome indices below this node, `cell[:len(cell_in)]` being those of `child_in`.
    `effect` is `B` in the full space and `circuit` measures it. `consistency_residual` is the distance between
    `K† B K` and the sum of the original effects of `cell_in`, `K` being the product of the Lüders operators above.
    """

    node_id: str
    cell: tuple[int, ...]
    cell_in: tuple[int, ...]
    effect: Effect
    circuit: CouplingCircuit
    child_in: TreeNode | Leaf
    child_out: TreeNode | Leaf
    consistency_residual: float

    @property
    def cell_out(self) -> tuple[int, ...]:
        return self.cell[len(self.cell_in) :]

    @property
    def children(self) -> tuple[TreeNode | Leaf, TreeNode | Leaf]:
        return (self.child_in, self.child_out)


@dataclass(frozen=True, eq=False)
class MeasurementTree:
    root: TreeNode
    povm: Povm
    strategy: str
    order: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.povm.dim

    @property
    def depth(self) -> int:
        def _depth(node: TreeNode | Leaf) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(_depth(node.child_in), _depth(node.child_out))

        return _depth(self.root)

    def nodes(self) -> Iterator[TreeNode]:
        """Nodes in preorder (node ids `n0`, `n1`, ... follow this order)."""
        pending: list[TreeNode | Leaf] = [self.root]
        while pending:
            node = pending.pop()
            if isinstance(node, TreeNode):
                yield node
                pending.extend((node.child_out, node.child_in))

    def leaves(self) -> Iterator[Leaf]:
        """Leaves from the `child_in` side to the `child_out` side."""
        pending: list[TreeNode | Leaf] = [self.root]
        while pending:
            node = pending.pop()
            if isinstance(node, Leaf):
                yield node
            else:
                pending.extend((node.child_out, node.child_in))

    def paths(self) -> dict[int, tuple[str, ...]]:
        """Node ids visited before reaching each outcome."""
        result: dict[int, tuple[str, ...]] = {}
        pending: list[tuple[TreeNode | Leaf, tuple[str, ...]]] = [(self.root, ())]
        while pending:
            node, path = pending.pop()
            if isinstance(node, Leaf):
                result[node.index] = path
            else:
                pending.extend((child, path + (node.node_id,)) for child in node.children)
        return result


def _validate_order(order: Optional[Sequence[int]], n: int) -> tuple[int, ...]:
    if n < 2:
        raise ValidationError(
            "A measurement tree needs at least two outcomes, got %(n)s.", code="too_few_outcomes", params={"n": n}
        )
    if order is None:
        return tuple(range(n))
    normalized = tuple(int(i) for i in order)
    if sorted(normalized) != list(range(n)):
        raise ValidationError(
            "Order %(order)s is not a permutation of the %(n)s outcomes.",
            code="bad_order",
            params={"order": list(normalized), "n": n},
        )
    return normalized


def _build(
    povm: Povm,
    current: Povm,
    cell: tuple[int, ...],
    kraus: ComplexMatrix,
    split: Splitter,
    ids: Iterator[int],
) -> TreeNode | Leaf:
    if len(cell) == 1:
        return Leaf(index=cell[0], label=povm[cell[0]].label)
    node_id = f"n{next(ids)}"
    size = split(cell)
    inside, outside = tuple(range(size)), tuple(range(size, len(cell)))
    coarse = Effect.clamped(sum(current[k].matrix for k in inside), "+".join(povm[cell[k]].label for k in inside))
    circuit = coupling_circuit(coarse)
    residual = frob_dist(kraus.conj().T @ coarse.matrix @ kraus, sum(povm[cell[k]].matrix for k in inside))
    if residual > CONSISTENCY_TOLERANCE:
        logger.warning("Node %s reproduces its outcomes only within %.3e.", node_id, residual)
    logger.debug("Node %s measures %s against the rest of %s.", node_id, coarse.label, list(cell))

    complement = Effect.clamped(np.eye(povm.dim) - coarse.matrix, "not")
    branches = []
    for positions, root in ((inside, coarse.sqrt), (outside, complement.sqrt)):
        sub_cell = tuple(cell[k] for k in positions)
        updated = conditional_update(current, positions) if len(positions) > 1 else current
        branches.append(_build(povm, updated, sub_cell, as_matrix(root @ kraus), split, ids))
    return TreeNode(
        node_id=node_id,
        cell=cell,
        cell_in=tuple(cell[k] for k in inside),
        effect=coarse,
        circuit=circuit,
        child_in=branches[0],
        child_out=branches[1],
        consistency_residual=residual,
    )


def build_tree(povm: Povm, split: Splitter, strategy: str, order: Optional[Sequence[int]] = None) -> MeasurementTree:
    """Build a tree whose nodes route the first `split(cell)` outcomes of their cell to `child_in`."""
    normalized = _validate_order(order, len(povm))
    ordered = Povm(
        effects=tuple(povm[i] for i in normalized), support=povm.support, rank_deficient=povm.rank_deficient
    )
    root = _build(povm, ordered, normalized, as_matrix(np.eye(povm.dim)), split, itertools.count())
    assert isinstance(root, TreeNode)
    tree = MeasurementTree(root=root, povm=povm, strategy=strategy, order=normalized)
    logger.debug("Planned a %s tree of depth %d for %d outcomes.", strategy, tree.depth, len(povm))
    return tree


def plan_outcome_decreasing(povm: Povm, order: Optional[Sequence[int]] = None) -> MeasurementTree:
    """
    Chain of `n - 1` nodes: each one asks whether the next outcome of `order` (ascending index by default) happened,
    and only the "no" branch goes on measuring.
    """
    return build_tree(povm, lambda cell: 1, OUTCOME_DECREASING, order)


def plan_binary_search(povm: Povm, order: Optional[Sequence[int]] = None) -> MeasurementTree:
    """Balanced tree: each node sends the first `ceil(k/2)` of its `k` outcomes to `child_in`. Depth `ceil(log2 n)`."""
    return build_tree(povm, lambda cell: math.ceil(len(cell) / 2), BINARY_SEARCH, order)


def plan(povm: Povm, strategy: str, order: Optional[Sequence[int]] = None) -> MeasurementTree:
    if strategy == OUTCOME_DECREASING:
        return plan_outcome_decreasing(povm, order)
    if strategy == BINARY_SEARCH:
        return plan_binary_search(povm, order)
    raise ValueError(f"Unknown strategy '{strategy}', expected one of {', '.join(STRATEGIES)}.")
