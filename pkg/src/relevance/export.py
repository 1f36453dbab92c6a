"""CSV and JSON serialization of relevance results."""

import csv
import io
import json

from .matrix import RelevanceResult


def _cell(value: float) -> str:
    return repr(float(value))


def p_matrix_csv(result: RelevanceResult) -> str:
    """
    P as CSV: header ``rule,<feature...>``, one row per rule id.
    """
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(["rule", *result.feature_names])
    for rule_id, row in zip(result.rule_ids, result.P):
        writer.writerow([rule_id, *(_cell(v) for v in row)])
    return output.getvalue()


def q_vector_csv(result: RelevanceResult) -> str:
    """q as a two-column CSV ``rule,q``."""
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(["rule", "q"])
    for rule_id, value in zip(result.rule_ids, result.q):
        writer.writerow([rule_id, _cell(value)])
    return output.getvalue()


def relevance_to_json(result: RelevanceResult) -> str:
    payload = {
        "rule_ids": list(result.rule_ids),
        "feature_names": list(result.feature_names),
        "consequents": list(result.consequents),
        "feature_metric": result.feature_metric,
        "rule_metric": result.rule_metric,
        "default_class": result.default_class,
        "P": [[float(v) for v in row] for row in result.P],
        "q": [float(v) for v in result.q],
        "covering": [float(v) for v in result.covering],
        "error": [float(v) for v in result.error],
    }
    return json.dumps(payload, indent=2) + "\n"
