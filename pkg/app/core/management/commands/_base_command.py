from __future__ import annotations
import csv
import io
import json
from argparse import ArgumentParser
from pathlib import Path
from typing import Any, Optional, Sequence
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand as DjangoCommand
from django.core.management.base import CommandError
from rest_framework import serializers
from core.run_config import FORMATS, RunConfig
from extensions.utilities.types import JSON
from linalg.exceptions import LinalgError
from povm.serializers import PovmDocumentSerializer, StateDocumentSerializer
from povm.structures import Povm, State


# Exit codes
DOMAIN_ERROR = 1
USAGE_ERROR = 2


class BaseCommand(DjangoCommand):
    """
    Base class for the simulator commands, with shortcuts for note, success, warning and error messages.

    Every command takes `--tol`, `--out` and `--format`, and implements `run` with the `RunConfig` built from its
    options. Domain errors (invalid POVMs, dimension mismatches...) exit with code 1; unreadable or malformed input
    files and bad option values exit with code 2.
    """

    name: str = ""
    formats: tuple[str, ...] = FORMATS
    default_format = "json"

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--tol", type=float, help="Override the validation and verification tolerance.")
        parser.add_argument("--out", help="Write the output to this file instead of stdout.")
        parser.add_argument(
            "--format",
            dest="output_format",
            choices=self.formats,
            help="Output format; inferred from the extension of --out when omitted.",
        )

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            config = RunConfig.from_options(self.name, options, self.default_format)
            if config.output_format not in self.formats:
                raise ValueError(f"The {self.name} command can't write {config.output_format}.")
            self.run(config)
        except ValidationError as error:
            for code, message in self._violations(error):
                self.error(f"[{code}] {message}")
            raise CommandError(f"{self.name}: invalid input.", returncode=DOMAIN_ERROR) from error
        except LinalgError as error:
            self.error(f"[{error.code}] {error}")
            raise CommandError(f"{self.name}: {error}", returncode=DOMAIN_ERROR) from error
        except ValueError as error:
            raise CommandError(f"{self.name}: {error}", returncode=USAGE_ERROR) from error

    def run(self, config: RunConfig) -> None:
        raise NotImplementedError()

    @staticmethod
    def _violations(error: ValidationError) -> list[tuple[str, str]]:
        violations = []
        for entry in error.error_list:
            message = str(entry.message)
            if entry.params:
                message = message % entry.params
            violations.append((entry.code or "invalid", message))
        return violations

    # Input

    def read_document(self, path: Optional[Path]) -> JSON:
        if path is None:
            raise CommandError(f"{self.name}: no input file given.", returncode=USAGE_ERROR)
        try:
            document: JSON = json.loads(Path(path).read_text())
        except OSError as error:
            raise CommandError(f"Can't read {path}: {error.strerror}.", returncode=USAGE_ERROR) from error
        except json.JSONDecodeError as error:
            raise CommandError(f"{path} is not valid JSON: {error}.", returncode=USAGE_ERROR) from error
        return document

    def _parsed(self, serializer: serializers.Serializer, path: Optional[Path]) -> Any:
        if not serializer.is_valid():
            self.error(json.dumps(serializer.errors))
            raise CommandError(f"{path} is not a valid document.", returncode=USAGE_ERROR)
        return serializer

    def load_povm(self, config: RunConfig) -> Povm:
        serializer = PovmDocumentSerializer(data=self.read_document(config.povm_path))
        return self._parsed(serializer, config.povm_path).to_povm(config.tol)

    def load_state(self, config: RunConfig) -> State:
        serializer = StateDocumentSerializer(data=self.read_document(config.state_path))
        return self._parsed(serializer, config.state_path).to_state(config.tol)

    # Output

    def write_json(self, config: RunConfig, data: JSON) -> None:
        self._emit(config, json.dumps(data, indent=2) + "\n")

    def write_csv(self, config: RunConfig, columns: Sequence[str], rows: Sequence[dict[str, str]]) -> None:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        self._emit(config, buffer.getvalue())

    def _emit(self, config: RunConfig, text: str) -> None:
        if config.out is None:
            self.stdout.write(text, ending="")
            return
        try:
            config.out.write_text(text)
        except OSError as error:
            raise CommandError(f"Can't write {config.out}: {error.strerror}.", returncode=USAGE_ERROR) from error
        self.success(f"Wrote {config.out}.")

    # Messages

    def note(self, message: str) -> None:
        """Print the message to stderr with HTTP_INFO style, leaving stdout to the command's output."""
        self.stderr.write(self.style.HTTP_INFO(message))

    def success(self, message: str) -> None:
        """Print the message to stdout with SUCCESS style."""
        self.stdout.write(self.style.SUCCESS(message))

    def warning(self, message: str) -> None:
        """Print the message to stderr with WARNING style."""
        self.stderr.write(self.style.WARNING(message))

    def error(self, message: str) -> None:
        """Print the message to stderr with ERROR style."""
        self.stderr.write(self.style.ERROR(message))
