from __future__ import annotations
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional
from extensions.utilities import empty, ext
from extensions.utilities.env import split_list
from sequential.tree import OUTCOME_DECREASING, STRATEGIES
from usd.problem import validate_omega
from usd.scenarios import SCENARIOS


ALL_SCENARIOS = "both"
FORMATS = ("json", "csv")


def parse_omegas(value: str) -> tuple[float, ...]:
    """
    Parse a comma separated list of angles. Entries are plain numbers or `pi/k` fractions (`pi/4`). Raises
    `ValueError` for unreadable entries and Django's `ValidationError` for angles outside `(0, π/4]`.
    """
    omegas: list[float] = []
    for entry in split_list(value):
        head, slash, divisor = entry.partition("/")
        if head.strip().lower() in ("pi", "π"):
            denominator = float(divisor) if slash else 1.0
            if denominator == 0:
                raise ValueError(f"Can't read the angle '{entry}'.")
            omega = math.pi / denominator
        else:
            omega = float(entry)
        omegas.append(validate_omega(omega))
    if not omegas:
        raise ValueError("At least one angle is required.")
    return tuple(omegas)


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on, read from the parsed command line options."""

    command: str
    povm_path: Optional[Path] = None
    state_path: Optional[Path] = None
    omegas: tuple[float, ...] = ()
    scenarios: tuple[str, ...] = SCENARIOS
    strategy: str = OUTCOME_DECREASING
    order: Optional[tuple[str, ...]] = None
    shots: Optional[int] = None
    seed: int = 0
    workers: Optional[int] = None
    output_format: str = "json"
    out: Optional[Path] = None
    tol: Optional[float] = None

    @property
    def sampling(self) -> bool:
        return self.shots is not None

    @classmethod
    def from_options(cls, command: str, options: dict[str, Any], default_format: str = "json") -> RunConfig:
        """
        Build the configuration, raising `ValueError` for unusable option values. When `--format` is missing the
        extension of `--out` decides, and `default_format` otherwise.
        """
        out = None if empty(options.get("out")) else Path(options["out"])
        output_format = options.get("output_format")
        if output_format is None:
            suffix = ext(out.name) if out is not None else ""
            output_format = suffix if suffix in FORMATS else default_format
        shots = options.get("shots")
        if shots is not None and shots < 1:
            raise ValueError(f"--shots must be at least 1, got {shots}.")
        workers = options.get("workers")
        if workers is not None and workers < 1:
            raise ValueError(f"--workers must be at least 1, got {workers}.")
        seed = options.get("seed") or 0
        if seed < 0:
            raise ValueError(f"--seed must not be negative, got {seed}.")
        tol = options.get("tol")
        if tol is not None and not tol > 0:
            raise ValueError(f"--tol must be positive, got {tol}.")
        strategy = options.get("strategy") or OUTCOME_DECREASING
        if strategy not in STRATEGIES:
            raise ValueError(f"Unknown strategy '{strategy}', expected one of {', '.join(STRATEGIES)}.")
        scenario = options.get("scenario") or ALL_SCENARIOS
        if scenario != ALL_SCENARIOS and scenario not in SCENARIOS:
            raise ValueError(f"Unknown scenario '{scenario}'.")
        order = options.get("order")
        return cls(
            command=command,
            povm_path=options.get("povm_file"),
            state_path=options.get("state"),
            omegas=parse_omegas(options["omega"]) if options.get("omega") is not None else (),
            scenarios=SCENARIOS if scenario == ALL_SCENARIOS else (scenario,),
            strategy=strategy,
            order=None if empty(order) else tuple(split_list(order)),
            shots=shots,
            seed=seed,
            workers=workers,
            output_format=output_format,
            out=out,
            tol=tol,
        )
