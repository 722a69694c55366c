from typing import Any, Optional
from rest_framework import serializers
from dilation.serializers import CouplingCircuitSerializer
from extensions.utilities import clear_Nones, format_probability
from extensions.utilities.types import JSON
from povm.serializers import ComplexMatrixField, StateDocumentSerializer
from sequential.execution import OutcomeReport, OutcomeResult, TreeVerification
from sequential.tree import Leaf, MeasurementTree, TreeNode


REPORT_CSV_COLUMNS = ["outcome_label", "exact_p", "empirical_count", "shots"]


class LeafSerializer(serializers.Serializer):
    outcome = serializers.CharField(source="label")
    index = serializers.IntegerField()


class TreeNodeSerializer(serializers.Serializer):
    """A node with its coupling circuit and both subtrees. The cells are given as outcome labels."""

    id = serializers.CharField(source="node_id")
    cell = serializers.SerializerMethodField()
    cell_in = serializers.SerializerMethodField()
    effect = ComplexMatrixField(source="effect.matrix")
    consistency_residual = serializers.FloatField()
    circuit = CouplingCircuitSerializer()
    child_in = serializers.SerializerMethodField()
    child_out = serializers.SerializerMethodField()

    def _labels(self, indices: tuple[int, ...]) -> list[str]:
        labels = self.context["labels"]
        return [labels[i] for i in indices]

    def _child(self, child: TreeNode | Leaf) -> JSON:
        if isinstance(child, Leaf):
            return LeafSerializer(child).data
        return TreeNodeSerializer(child, context=self.context).data

    def get_cell(self, node: TreeNode) -> list[str]:
        return self._labels(node.cell)

    def get_cell_in(self, node: TreeNode) -> list[str]:
        return self._labels(node.cell_in)

    def get_child_in(self, node: TreeNode) -> JSON:
        return self._child(node.child_in)

    def get_child_out(self, node: TreeNode) -> JSON:
        return self._child(node.child_out)


class MeasurementTreeSerializer(serializers.Serializer):
    strategy = serializers.CharField()
    dim = serializers.IntegerField()
    depth = serializers.IntegerField()
    outcomes = serializers.ListField(child=serializers.CharField(), source="povm.labels")
    order = serializers.SerializerMethodField()
    root = serializers.SerializerMethodField()

    def get_order(self, tree: MeasurementTree) -> list[str]:
        return [tree.povm[i].label for i in tree.order]

    def get_root(self, tree: MeasurementTree) -> JSON:
        return TreeNodeSerializer(tree.root, context={"labels": tree.povm.labels}).data


class TreeVerificationSerializer(serializers.Serializer):
    trials = serializers.IntegerField()
    max_deviation = serializers.FloatField()
    tol = serializers.FloatField()
    passed = serializers.BooleanField()


class OutcomeResultSerializer(serializers.Serializer):
    label = serializers.CharField()
    index = serializers.IntegerField()
    exact_p = serializers.FloatField(source="exact_probability")
    empirical_count = serializers.IntegerField(allow_null=True)
    path = serializers.ListField(child=serializers.CharField())
    post_state = serializers.SerializerMethodField()

    def get_post_state(self, outcome: OutcomeResult) -> Optional[JSON]:
        if outcome.post_state is None:
            return None
        return StateDocumentSerializer.from_state(outcome.post_state)


class OutcomeReportSerializer(serializers.Serializer):
    """
    `{"shots": N | absent, "total_probability": p, "outcomes": [...]}`. Exact runs leave out `shots` and the counts;
    outcomes behind a dead branch have no `post_state`.
    """

    shots = serializers.IntegerField(allow_null=True)
    total_probability = serializers.FloatField()
    outcomes = OutcomeResultSerializer(many=True)

    @classmethod
    def export(cls, report: OutcomeReport, verification: Optional[TreeVerification] = None, **extra: Any) -> JSON:
        data = dict(cls(report).data)
        if verification is not None:
            data["verification"] = TreeVerificationSerializer(verification).data
        return clear_Nones(data, **extra)


def report_csv_rows(report: OutcomeReport) -> list[dict[str, str]]:
    """Rows for `REPORT_CSV_COLUMNS`; the count columns are left empty for exact runs."""
    return [
        {
            "outcome_label": outcome.label,
            "exact_p": format_probability(outcome.exact_probability),
            "empirical_count": "" if outcome.empirical_count is None else str(outcome.empirical_count),
            "shots": "" if report.shots is None else str(report.shots),
        }
        for outcome in report.outcomes
    ]
