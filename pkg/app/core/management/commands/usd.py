from argparse import ArgumentParser
from dataclasses import asdict
from core.management.commands._base_command import BaseCommand
from core.run_config import ALL_SCENARIOS, RunConfig
from extensions.utilities import clear_Nones
from usd.scenarios import SCENARIOS
from usd.sweep import SWEEP_CSV_COLUMNS, sweep


class Command(BaseCommand):
    help = (
        "Sweep the unambiguous discrimination of cos ω|0> ± sin ω|1> over angles, for one or both measurement orders. "
        "Writes one row per angle, scenario, input state and outcome."
    )

    name = "usd"
    default_format = "csv"

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--omega", required=True, help="Comma separated angles in (0, π/4]; 'pi/k' is accepted.")
        parser.add_argument("--scenario", choices=SCENARIOS + (ALL_SCENARIOS,), default=ALL_SCENARIOS)
        parser.add_argument("--shots", type=int, help="Sampled runs per angle, scenario and input state.")
        parser.add_argument("--seed", type=int, default=0, help="Seed for the sampled runs.")
        parser.add_argument("--workers", type=int, help="Threads sharing the sampling blocks.")
        super().add_arguments(parser)

    def run(self, config: RunConfig) -> None:
        rows = sweep(config.omegas, config.scenarios, shots=config.shots, seed=config.seed, workers=config.workers)
        if config.output_format == "csv":
            self.write_csv(config, SWEEP_CSV_COLUMNS, [row.as_csv() for row in rows])
            return
        self.write_json(config, {"rows": [clear_Nones(asdict(row)) for row in rows]})
