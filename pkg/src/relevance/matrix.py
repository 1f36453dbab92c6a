"""Feature relevance matrix P and rule relevance vector q."""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..config import FEATURE_METRICS, RULE_METRICS
from ..dataset import Dataset, DatasetError
from ..logger import get_logger
from ..rules import Rule, RuleSet, check_schema, condition_mask
from .metrics import (
    alt_metrics_from_counts,
    count_cover,
    covering_from_counts,
    error_from_counts,
    feature_relevance_from_counts,
    impurity_gain_from_masks,
    rule_relevance_from_counts,
)

logger = get_logger(__name__)

DEFAULT_FEATURE_METRIC = "error-increase"
DEFAULT_RULE_METRIC = "covering-error"


@dataclass(frozen=True, eq=False)
class RelevanceResult:
    """
    Relevance of every feature for every rule (P, n x m) and of every rule
    (q, length n) over one dataset, plus the provenance needed downstream.
    """
    P: np.ndarray
    q: np.ndarray
    rule_ids: Tuple[str, ...]
    feature_names: Tuple[str, ...]
    consequents: Tuple[str, ...]
    covering: np.ndarray
    error: np.ndarray
    feature_metric: str = DEFAULT_FEATURE_METRIC
    rule_metric: str = DEFAULT_RULE_METRIC
    default_class: str = ""

    @property
    def n_rules(self) -> int:
        return len(self.rule_ids)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def metric_tags(self) -> Tuple[str, str]:
        return (self.feature_metric, self.rule_metric)


@dataclass
class _RuleRow:
    p_row: np.ndarray
    q_value: float
    covering: float
    error: float


def _validate_selectors(feature_metric: str, rule_metric: str) -> None:
    if feature_metric not in FEATURE_METRICS:
        raise ValueError(f"Invalid feature metric: {feature_metric}. Valid: {list(FEATURE_METRICS)}")
    if rule_metric not in RULE_METRICS:
        raise ValueError(f"Invalid rule metric: {rule_metric}. Valid: {list(RULE_METRICS)}")


def _evaluate_rule(
    ds: Dataset,
    rule: Rule,
    feature_metric: str,
    rule_metric: str,
) -> _RuleRow:
    class_mask = ds.class_mask(rule.consequent)
    masks = [condition_mask(cond, ds) for cond in rule.conditions]

    full_mask = np.ones(ds.n_samples, dtype=bool)
    for mask in masks:
        full_mask &= mask
    full = count_cover(full_mask, class_mask)

    p_row = np.zeros(ds.n_features, dtype=np.float64)
    for feature in rule.features:
        reduced_mask = np.ones(ds.n_samples, dtype=bool)
        for cond, mask in zip(rule.conditions, masks):
            if cond.feature != feature:
                reduced_mask &= mask
        if feature_metric == "impurity-gain":
            value = impurity_gain_from_masks(ds, full_mask, reduced_mask)
        else:
            value = feature_relevance_from_counts(full, count_cover(reduced_mask, class_mask))
        p_row[ds.feature_index(feature)] = value

    if rule_metric == "covering-error":
        q_value = rule_relevance_from_counts(full)
    else:
        q_value = getattr(alt_metrics_from_counts(full), rule_metric)

    return _RuleRow(p_row, q_value, covering_from_counts(full), error_from_counts(full))


def relevance_matrix(
    ds: Dataset,
    rs: RuleSet,
    feature_metric: str = DEFAULT_FEATURE_METRIC,
    rule_metric: str = DEFAULT_RULE_METRIC,
    jobs: int = 1,
) -> RelevanceResult:
    """
    Compute P[j][i] = feature relevance of v_i in R^j and q[j] = relevance of R^j.

    Lift is unbounded, so under the lift selector q is divided by the
    largest lift in the rule set to stay in [0, 1].

    Args:
        ds: Dataset the rules are evaluated on
        rs: Rule set; its order fixes the rows of P and q
        feature_metric: "error-increase" (default) or "impurity-gain"
        rule_metric: "covering-error" (default), "support", "confidence" or "lift"
        jobs: Worker threads; rows are independent

    Raises:
        RuleEvaluationError: Rules reference unknown features or misuse operators
        DatasetError: A consequent is not a class of the dataset
    """
    _validate_selectors(feature_metric, rule_metric)
    check_schema(rs.rules, ds)
    unknown = sorted({c for c in rs.consequents if c not in ds.class_labels})
    if unknown:
        raise DatasetError(
            f"rule consequents not in dataset classes: {unknown}. Valid labels: {list(ds.class_labels)}"
        )

    if jobs != 1 and len(rs) > 1:
        rows: List[_RuleRow] = Parallel(n_jobs=jobs, prefer="threads")(
            delayed(_evaluate_rule)(ds, rule, feature_metric, rule_metric) for rule in rs.rules
        )
    else:
        rows = [_evaluate_rule(ds, rule, feature_metric, rule_metric) for rule in rs.rules]

    n, m = len(rs), ds.n_features
    P = np.vstack([row.p_row for row in rows]) if rows else np.zeros((0, m))
    q = np.asarray([row.q_value for row in rows], dtype=np.float64)

    if rule_metric == "lift" and q.size and q.max() > 0:
        q = q / q.max()

    logger.debug(f"Relevance computed for {n} rules x {m} features ({feature_metric}, {rule_metric})")

    return RelevanceResult(
        P=P,
        q=q,
        rule_ids=rs.rule_ids,
        feature_names=ds.feature_names,
        consequents=rs.consequents,
        covering=np.asarray([row.covering for row in rows], dtype=np.float64),
        error=np.asarray([row.error for row in rows], dtype=np.float64),
        feature_metric=feature_metric,
        rule_metric=rule_metric,
        default_class=ds.majority_class(),
    )

