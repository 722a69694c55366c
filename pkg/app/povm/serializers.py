"""
Serializers for the JSON documents read and written by the commands.

Complex numbers are `[re, im]` pairs (a bare real number is accepted on input); matrices are row-major lists of rows.
"""

from typing import Any
import numpy as np
from rest_framework import serializers
from extensions.utilities.types import JSON, ComplexMatrix
from povm.measurement import validate_povm
from povm.structures import Povm, State


def complex_to_internal(value: Any) -> complex:
    if isinstance(value, bool):
        raise serializers.ValidationError("Expected a number or an [re, im] pair.", code="invalid")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(part, (int, float)) and not isinstance(part, bool) for part in value
    ):
        return complex(value[0], value[1])
    raise serializers.ValidationError("Expected a number or an [re, im] pair.", code="invalid")


def complex_to_representation(value: complex) -> list[float]:
    # `+ 0.0` turns negative zeros into positive ones
    return [float(value.real) + 0.0, float(value.imag) + 0.0]


class ComplexVectorField(serializers.Field):
    """A list of complex numbers."""

    def to_internal_value(self, data: Any) -> np.ndarray:
        if not isinstance(data, list) or len(data) == 0:
            raise serializers.ValidationError("Expected a non-empty list of complex numbers.", code="invalid")
        return np.array([complex_to_internal(value) for value in data], dtype=np.complex128)

    def to_representation(self, value: np.ndarray) -> JSON:
        return [complex_to_representation(entry) for entry in np.asarray(value).reshape(-1)]


class ComplexMatrixField(serializers.Field):
    """A rectangular list of rows of complex numbers."""

    def to_internal_value(self, data: Any) -> ComplexMatrix:
        if not isinstance(data, list) or len(data) == 0 or not all(isinstance(row, list) for row in data):
            raise serializers.ValidationError("Expected a non-empty list of rows.", code="invalid")
        if len({len(row) for row in data}) != 1 or len(data[0]) == 0:
            raise serializers.ValidationError("All rows must have the same, non-zero length.", code="invalid")
        return np.array([[complex_to_internal(value) for value in row] for row in data], dtype=np.complex128)

    def to_representation(self, value: ComplexMatrix) -> JSON:
        return [[complex_to_representation(entry) for entry in row] for row in np.asarray(value)]


class EffectDocumentSerializer(serializers.Serializer):
    label = serializers.CharField(required=False, allow_blank=False)
    matrix = ComplexMatrixField()


class PovmDocumentSerializer(serializers.Serializer):
    """
    `{"dim": d, "effects": [{"label": str, "matrix": matrix}, ...]}`. Effects without a label are named by their
    1-based position.

    Only the document shape is checked here; `to_povm` runs the POVM validation and raises Django's `ValidationError`.
    """

    dim = serializers.IntegerField(min_value=1)
    effects = EffectDocumentSerializer(many=True, allow_empty=True)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        labels = [effect.get("label", str(i + 1)) for i, effect in enumerate(attrs["effects"])]
        if len(set(labels)) != len(labels):
            raise serializers.ValidationError({"effects": "Effect labels must be unique."}, code="invalid")
        return attrs

    def to_povm(self, tol: float | None = None) -> Povm:
        effects = self.validated_data["effects"]
        return validate_povm(
            [effect["matrix"] for effect in effects],
            labels=[effect.get("label", str(i + 1)) for i, effect in enumerate(effects)],
            tol=tol,
            dim=self.validated_data["dim"],
        )

    @staticmethod
    def from_povm(povm: Povm) -> JSON:
        return {
            "dim": povm.dim,
            "effects": [
                {"label": effect.label, "matrix": ComplexMatrixField().to_representation(effect.matrix)}
                for effect in povm
            ],
        }


class StateDocumentSerializer(serializers.Serializer):
    """`{"dim": d, "pure": vector}` or `{"dim": d, "density": matrix}`; `dim` must match the size of the state."""

    dim = serializers.IntegerField(min_value=1)
    pure = ComplexVectorField(required=False)
    density = ComplexMatrixField(required=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if ("pure" in attrs) == ("density" in attrs):
            raise serializers.ValidationError("Exactly one of 'pure' and 'density' is required.", code="invalid")
        size = len(attrs["pure"]) if "pure" in attrs else attrs["density"].shape[0]
        if size != attrs["dim"]:
            raise serializers.ValidationError({"dim": "Does not match the size of the state."}, code="invalid")
        return attrs

    def to_state(self, tol: float | None = None) -> State:
        """Build the state; raises Django's `ValidationError` (code `not_state`) for invalid density matrices."""
        if "pure" in self.validated_data:
            return State.pure(self.validated_data["pure"])
        return State.density(self.validated_data["density"], tol)

    @staticmethod
    def from_state(state: State) -> JSON:
        return {"dim": state.dim, "density": ComplexMatrixField().to_representation(state.matrix)}
