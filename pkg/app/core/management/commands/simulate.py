from argparse import ArgumentParser
from pathlib import Path
from core.management.commands._base_command import BaseCommand
from core.management.commands.plan import add_plan_arguments, resolve_order
from core.run_config import RunConfig
from sequential.execution import execute_exact, sample, verify_tree
from sequential.serializers import REPORT_CSV_COLUMNS, OutcomeReportSerializer, report_csv_rows
from sequential.tree import plan


class Command(BaseCommand):
    help = (
        "Run a state through the measurement tree of a POVM: exact outcome probabilities and post-measurement states, "
        "plus sampled counts when --shots is given."
    )

    name = "simulate"

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_plan_arguments(parser)
        parser.add_argument("--state", type=Path, required=True, help="JSON state document.")
        parser.add_argument("--shots", type=int, help="Number of sampled runs.")
        parser.add_argument("--seed", type=int, default=0, help="Seed for the sampled runs.")
        parser.add_argument("--workers", type=int, help="Threads sharing the sampling blocks.")
        super().add_arguments(parser)

    def run(self, config: RunConfig) -> None:
        povm = self.load_povm(config)
        state = self.load_state(config)
        tree = plan(povm, config.strategy, resolve_order(povm, config.order))
        if config.sampling:
            assert config.shots is not None
            report = sample(tree, state, config.shots, seed=config.seed, workers=config.workers)
        else:
            report = execute_exact(tree, state)
        verification = verify_tree(tree, tol=config.tol)
        if not verification.passed:
            self.warning(f"The tree deviates from the Born rule by {verification.max_deviation:.3e}.")
        if config.output_format == "csv":
            deviation, trials = verification.max_deviation, verification.trials
            self.note(f"Verification: max deviation {deviation:.3e} over {trials} states.")
            self.write_csv(config, REPORT_CSV_COLUMNS, report_csv_rows(report))
            return
        seed = config.seed if config.sampling else None
        data = OutcomeReportSerializer.export(
            report, verification, strategy=tree.strategy, depth=tree.depth, seed=seed
        )
        self.write_json(config, data)
