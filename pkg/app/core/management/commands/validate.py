from argparse import ArgumentParser
from pathlib import Path
from core.management.commands._base_command import BaseCommand
from core.run_config import RunConfig
from dilation.naimark import peres_dimension


class Command(BaseCommand):
    help = "Validate a POVM document. Every violated condition is listed on stderr and the command exits with 1."

    name = "validate"
    formats = ("json",)

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("povm_file", type=Path, help="JSON POVM document.")
        super().add_arguments(parser)

    def run(self, config: RunConfig) -> None:
        povm = self.load_povm(config)
        self.write_json(
            config,
            {
                "valid": True,
                "dim": povm.dim,
                "outcomes": len(povm),
                "labels": list(povm.labels),
                "naimark_dimension": povm.dim * len(povm),
                "peres_dimension": peres_dimension(povm),
            },
        )
