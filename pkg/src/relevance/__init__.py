"""Covering/error metrics, the relevance matrix P and the rule relevance vector q."""

from .metrics import (
    CoverCounts,
    RuleMetrics,
    alt_rule_metrics,
    covering,
    error,
    feature_relevance,
    gini_impurity,
    impurity_gain_relevance,
    rule_relevance,
)
from .matrix import RelevanceResult, relevance_matrix
from .export import p_matrix_csv, q_vector_csv, relevance_to_json

__all__ = [
    "CoverCounts",
    "RuleMetrics",
    "alt_rule_metrics",
    "covering",
    "error",
    "feature_relevance",
    "gini_impurity",
    "impurity_gain_relevance",
    "rule_relevance",
    "RelevanceResult",
    "relevance_matrix",
    "p_matrix_csv",
    "q_vector_csv",
    "relevance_to_json",
]
