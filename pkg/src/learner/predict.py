"""Prediction from possibly overlapping rule sets."""

from typing import Any, Mapping, Optional

import numpy as np

from ..dataset import ColumnKind, Dataset
from ..relevance import RelevanceResult, relevance_matrix
from ..relevance.matrix import DEFAULT_FEATURE_METRIC, DEFAULT_RULE_METRIC
from ..rules import RuleSet, rule_mask, satisfies


def ruleset_predict(
    rs: RuleSet,
    rd: RelevanceResult,
    sample: Mapping[str, Any],
    kinds: Optional[Mapping[str, ColumnKind]] = None,
) -> str:
    """
    Consequent of the satisfied rule with the largest q (first in rule
    order on ties); the majority class recorded in ``rd`` when no rule fires.

    Pass ``kinds`` for raw rows such as CSV records, where numeric cells
    arrive as strings.
    """
    best_label: Optional[str] = None
    best_q = -np.inf
    for rule, q_value in zip(rs.rules, rd.q):
        if q_value > best_q and satisfies(rule, sample, kinds):
            best_label, best_q = rule.consequent, q_value
    return rd.default_class if best_label is None else best_label


class RuleSetClassifier:
    """Vectorized max-q rule set prediction."""

    def __init__(
        self,
        rs: RuleSet,
        relevance: RelevanceResult,
        kinds: Optional[Mapping[str, ColumnKind]] = None,
    ):
        if len(rs) != relevance.n_rules:
            raise ValueError(f"rule set has {len(rs)} rules but relevance covers {relevance.n_rules}")
        self.rules = rs
        self.relevance = relevance
        self.kinds = dict(kinds) if kinds is not None else None

    @classmethod
    def fit(
        cls,
        ds: Dataset,
        rs: RuleSet,
        feature_metric: str = DEFAULT_FEATURE_METRIC,
        rule_metric: str = DEFAULT_RULE_METRIC,
    ) -> "RuleSetClassifier":
        kinds = dict(zip(ds.feature_names, ds.column_kinds))
        return cls(rs, relevance_matrix(ds, rs, feature_metric, rule_metric), kinds)

    def predict(self, sample: Mapping[str, Any]) -> str:
        return ruleset_predict(self.rules, self.relevance, sample, self.kinds)

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        labels = np.full(ds.n_samples, self.relevance.default_class, dtype=object)
        best_q = np.full(ds.n_samples, -np.inf)
        for rule, q_value in zip(self.rules.rules, self.relevance.q):
            wins = rule_mask(rule, ds) & (q_value > best_q)
            labels[wins] = rule.consequent
            best_q[wins] = q_value
        return labels
