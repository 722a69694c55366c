from typing import Optional
from rest_framework import serializers
from dilation.coupling import CouplingCircuit, qubit_factorization
from extensions.utilities.types import JSON
from povm.serializers import ComplexMatrixField


class QubitFactorizationSerializer(serializers.Serializer):
    v0 = ComplexMatrixField(source="pre_rotation")
    w = ComplexMatrixField(source="controlled_gate")


class CouplingCircuitSerializer(serializers.Serializer):
    """
    `{"basis_change": matrix, "eigenvalues": [...], "blocks": [matrix, ...], "factorized": {"v0", "w"} | null}`.
    Only qubit circuits are factorized.
    """

    basis_change = ComplexMatrixField()
    eigenvalues = serializers.SerializerMethodField()
    blocks = serializers.ListField(child=ComplexMatrixField())
    factorized = serializers.SerializerMethodField()

    def get_eigenvalues(self, circuit: CouplingCircuit) -> list[float]:
        return [float(lam) + 0.0 for lam in circuit.eigenvalues]

    def get_factorized(self, circuit: CouplingCircuit) -> Optional[JSON]:
        if circuit.dim != 2:
            return None
        return QubitFactorizationSerializer(qubit_factorization(circuit)).data
