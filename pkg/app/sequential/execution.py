"""Exact and sampled execution of measurement trees, and the Born-rule self-check."""

from __future__ import annotations
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional
import numpy as np
from django.conf import settings
from dilation.coupling import apply_coupling
from extensions.utilities.types import SeedLike
from linalg.exceptions import DimensionMismatch
from povm.generators import random_state
from povm.measurement import outcome_probabilities
from povm.structures import Branch, Povm, State
from sequential.tree import Leaf, MeasurementTree, TreeNode


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OutcomeResult:
    index: int
    label: str
    exact_probability: float
    post_state: Optional[State]
    path: tuple[str, ...]
    empirical_count: Optional[int] = None


@dataclass(frozen=True, eq=False)
class OutcomeReport:
    """One result per outcome of the POVM, in its original order. `shots` is only set by `sample`."""

    outcomes: tuple[OutcomeResult, ...]
    shots: Optional[int] = None

    @property
    def probabilities(self) -> list[float]:
        return [outcome.exact_probability for outcome in self.outcomes]

    @property
    def total_probability(self) -> float:
        return math.fsum(self.probabilities)

    @property
    def counts(self) -> Optional[list[int]]:
        if self.shots is None:
            return None
        return [outcome.empirical_count or 0 for outcome in self.outcomes]

    def distribution(self) -> dict[str, float]:
        return {outcome.label: outcome.exact_probability for outcome in self.outcomes}

    def __getitem__(self, label: str) -> OutcomeResult:
        for outcome in self.outcomes:
            if outcome.label == label:
                return outcome
        raise KeyError(label)


_DEAD = Branch(weight=0.0, state=None)


def _traverse(
    tree: MeasurementTree, state: State, null_tol: Optional[float]
) -> tuple[dict[int, OutcomeResult], dict[str, float]]:
    """Run every branch of the tree. Returns the leaf results and the probability of `child_in` at each live node."""
    if state.dim != tree.dim:
        raise DimensionMismatch(f"Tree has dimension {tree.dim} but the state has dimension {state.dim}.")
    paths = tree.paths()
    results: dict[int, OutcomeResult] = {}
    p_in: dict[str, float] = {}
    pending: list[tuple[TreeNode, Optional[State], float]] = [(tree.root, state, 1.0)]
    while pending:
        node, current, weight = pending.pop()
        branches = apply_coupling(node.circuit, current, null_tol) if current is not None else (_DEAD, _DEAD)
        live = [0.0 if branch.is_null else branch.weight for branch in branches]
        if current is not None and sum(live) > 0:
            p_in[node.node_id] = live[0] / sum(live)
        if current is not None and 0.0 in live:
            logger.debug("Node %s has a dead branch (weights %s).", node.node_id, [b.weight for b in branches])
        for child, branch, branch_weight in zip(node.children, branches, live):
            if isinstance(child, Leaf):
                results[child.index] = OutcomeResult(
                    index=child.index,
                    label=child.label,
                    exact_probability=weight * branch_weight,
                    post_state=branch.state,
                    path=paths[child.index],
                )
            else:
                pending.append((child, branch.state, weight * branch_weight))
    return results, p_in


def execute_exact(tree: MeasurementTree, state: State, null_tol: Optional[float] = None) -> OutcomeReport:
    """
    Follow every branch of the tree: the probability of an outcome is the product of the branch weights along its
    path and its post-measurement state is what the last coupling leaves behind. Outcomes behind a dead branch get
    probability 0 and no state.
    """
    results, _ = _traverse(tree, state, null_tol)
    report = OutcomeReport(outcomes=tuple(results[i] for i in range(len(tree.povm))))
    if abs(report.total_probability - 1) > 1e-10:
        logger.warning("Tree probabilities add up to %.15g.", report.total_probability)
    return report


def _fresh_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    """A `SeedSequence` whose spawn counter starts at zero; a passed sequence is copied, never spawned from."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key, pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)


def _sample_block(
    tree: MeasurementTree, p_in: dict[str, float], seed: np.random.SeedSequence, size: int
) -> np.ndarray:
    """Descend `size` shots at once; a shot stops at the first leaf it reaches."""
    rng = np.random.default_rng(seed)
    draws = rng.random((size, tree.depth))
    counts = np.zeros(len(tree.povm), dtype=np.int64)
    pending: list[tuple[TreeNode, np.ndarray, int]] = [(tree.root, np.arange(size), 0)]
    while pending:
        node, shots, level = pending.pop()
        took_in = draws[shots, level] < p_in.get(node.node_id, 0.0)
        for child, selected in ((node.child_in, shots[took_in]), (node.child_out, shots[~took_in])):
            if selected.size == 0:
                continue
            if isinstance(child, Leaf):
                counts[child.index] += selected.size
            else:
                pending.append((child, selected, level + 1))
    return counts


def sample(
    tree: MeasurementTree,
    state: State,
    shots: int,
    seed: SeedLike = 0,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
    null_tol: Optional[float] = None,
) -> OutcomeReport:
    """
    Simulate `shots` single runs of the tree. Shots are cut into blocks of `block_size`, block `k` drawing from the
    `k`-th child of `SeedSequence(seed)`, so counts depend on `(seed, shots, block_size)` only and not on `workers`.
    """
    if shots < 1:
        raise ValueError(f"At least one shot is required, got {shots}.")
    workers = settings.SAMPLING_WORKERS if workers is None else workers
    block_size = settings.SAMPLING_BLOCK_SIZE if block_size is None else block_size
    results, p_in = _traverse(tree, state, null_tol)

    root_seed = _fresh_seed_sequence(seed)
    sizes = [block_size] * (shots // block_size) + ([shots % block_size] if shots % block_size else [])
    seeds = root_seed.spawn(len(sizes))
    logger.debug("Sampling %d shots in %d blocks on %d worker(s).", shots, len(sizes), workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(lambda args: _sample_block(tree, p_in, *args), zip(seeds, sizes)))
    else:
        blocks = [_sample_block(tree, p_in, block_seed, size) for block_seed, size in zip(seeds, sizes)]
    counts = np.sum(blocks, axis=0)
    outcomes = tuple(replace(results[i], empirical_count=int(counts[i])) for i in range(len(tree.povm)))
    return OutcomeReport(outcomes=outcomes, shots=shots)


@dataclass(frozen=True)
class TreeVerification:
    trials: int
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol


def verify_tree(
    tree: MeasurementTree,
    povm: Optional[Povm] = None,
    trials: Optional[int] = None,
    tol: Optional[float] = None,
    seed: Optional[int] = None,
) -> TreeVerification:
    """
    Compare the tree with the Born rule of `povm` (the one it was planned from by default) on `trials` random states,
    alternating pure and mixed ones, and report the largest deviation of any outcome probability.
    """
    povm = tree.povm if povm is None else povm
    trials = settings.VERIFY_TRIALS if trials is None else trials
    tol = settings.LINALG_TOLERANCE if tol is None else tol
    rng = np.random.default_rng(settings.VERIFY_SEED if seed is None else seed)
    deviation = 0.0
    for trial in range(trials):
        state = random_state(rng, tree.dim, pure=trial % 2 == 0)
        direct = outcome_probabilities(povm, state)
        observed = execute_exact(tree, state).probabilities
        deviation = max(deviation, max(abs(a - b) for a, b in zip(direct, observed)))
    verification = TreeVerification(trials=trials, max_deviation=deviation, tol=tol)
    logger.debug("Verified the tree on %d states: max deviation %.3e.", trials, deviation)
    if not verification.passed:
        logger.warning("Tree deviates from the Born rule by %.3e (tolerance %.1e).", deviation, tol)
    return verification
