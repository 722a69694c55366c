"""Sweeps over ω producing plot-ready rows: one per angle, scenario, input state and outcome."""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence
import numpy as np
from extensions.utilities import format_probability
from sequential.execution import sample
from usd.scenarios import SCENARIOS, build_scenario


logger = logging.getLogger(__name__)

SWEEP_CSV_COLUMNS = ["omega", "scenario", "input", "outcome", "exact_p", "emp_freq", "shots"]


@dataclass(frozen=True)
class SweepRow:
    omega: float
    scenario: str
    input: str
    outcome: str
    exact_p: float
    emp_freq: Optional[float] = None
    shots: Optional[int] = None

    def as_csv(self) -> dict[str, str]:
        return {
            "omega": format_probability(self.omega),
            "scenario": self.scenario,
            "input": self.input,
            "outcome": self.outcome,
            "exact_p": format_probability(self.exact_p),
            "emp_freq": "" if self.emp_freq is None else format_probability(self.emp_freq),
            "shots": "" if self.shots is None else str(self.shots),
        }


def sweep(
    omegas: Iterable[float],
    kinds: Optional[Sequence[str]] = None,
    shots: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """
    Exact probabilities for every `(ω, scenario, input)` and, when `shots` is given, sampled frequencies. Each
    sampled run draws from its own child of `SeedSequence(seed)`, taken in row order.
    """
    kinds = list(SCENARIOS) if kinds is None else list(kinds)
    omegas = list(omegas)
    root_seed = np.random.SeedSequence(seed)
    run_seeds = iter(root_seed.spawn(len(omegas) * len(kinds) * 2))
    rows: list[SweepRow] = []
    for omega in omegas:
        for kind in kinds:
            scenario = build_scenario(kind, omega)
            for name, state in scenario.problem.inputs.items():
                report = scenario.execute(state)
                run_seed = next(run_seeds)
                sampled = sample(scenario.tree, state, shots, seed=run_seed, workers=workers) if shots else None
                for outcome in report.outcomes:
                    frequency = None
                    if sampled is not None and shots:
                        frequency = (sampled[outcome.label].empirical_count or 0) / shots
                    rows.append(
                        SweepRow(
                            omega=scenario.omega,
                            scenario=kind,
                            input=name,
                            outcome=outcome.label,
                            exact_p=outcome.exact_probability,
                            emp_freq=frequency,
                            shots=shots,
                        )
                    )
    logger.debug("Swept %d angles over %s: %d rows.", len(omegas), ", ".join(kinds), len(rows))
    return rows
