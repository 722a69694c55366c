from argparse import ArgumentParser
from pathlib import Path
from django.core.exceptions import ValidationError
from core.management.commands._base_command import BaseCommand
from core.run_config import RunConfig
from povm.structures import Povm
from sequential.serializers import MeasurementTreeSerializer
from sequential.tree import OUTCOME_DECREASING, STRATEGIES, plan


def resolve_order(povm: Povm, labels: tuple[str, ...] | None) -> tuple[int, ...] | None:
    """Turn outcome labels into indices; unknown labels are a `bad_order` error."""
    if labels is None:
        return None
    unknown = [label for label in labels if label not in povm.labels]
    if unknown:
        raise ValidationError(
            "Unknown outcomes in the order: %(unknown)s.", code="bad_order", params={"unknown": ", ".join(unknown)}
        )
    return tuple(povm.labels.index(label) for label in labels)


def add_plan_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("povm_file", type=Path, help="JSON POVM document.")
    parser.add_argument("--strategy", choices=STRATEGIES, default=OUTCOME_DECREASING, help="How outcomes are split.")
    parser.add_argument("--order", help="Comma separated outcome labels, in the order the tree handles them.")


class Command(BaseCommand):
    help = "Plan the sequence of two-outcome measurements realizing a POVM and print the tree as JSON."

    name = "plan"
    formats = ("json",)

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_plan_arguments(parser)
        super().add_arguments(parser)

    def run(self, config: RunConfig) -> None:
        povm = self.load_povm(config)
        tree = plan(povm, config.strategy, resolve_order(povm, config.order))
        self.write_json(config, MeasurementTreeSerializer(tree).data)
