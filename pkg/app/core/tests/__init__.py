from io import StringIO
from pathlib import Path
from typing import Any
import numpy as np
from django.core.management import CommandError, call_command
from extensions.utilities.test import clear_colors, sample_json_file
from extensions.utilities.types import JSON
from povm.serializers import ComplexMatrixField, PovmDocumentSerializer
from povm.structures import Povm


def povm_document(povm: Povm) -> JSON:
    return PovmDocumentSerializer.from_povm(povm)


def pure_state_document(vector: list[complex]) -> JSON:
    return {"dim": len(vector), "pure": [[float(np.real(v)), float(np.imag(v))] for v in vector]}


def density_state_document(matrix: np.ndarray) -> JSON:
    return {"dim": matrix.shape[0], "density": ComplexMatrixField().to_representation(matrix)}


def sample_povm_file(folder: Path | str, povm: Povm, name: str = "povm.json") -> Path:
    return sample_json_file(folder, povm_document(povm), name)


def run_command(name: str, *args: Any, **options: Any) -> tuple[str, str]:
    """Call the command and return what it wrote to stdout and stderr, without colors."""
    stdout, stderr = StringIO(), StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr, **options)
    return clear_colors(stdout.getvalue()), clear_colors(stderr.getvalue())


def run_failing_command(name: str, *args: Any, **options: Any) -> tuple[int, str]:
    """Call a command expected to fail and return its exit code and what it wrote to stderr, without colors."""
    stderr = StringIO()
    try:
        call_command(name, *args, stdout=StringIO(), stderr=stderr, **options)
    except CommandError as error:
        return error.returncode, clear_colors(stderr.getvalue())
    raise AssertionError(f"The {name} command did not fail.")
