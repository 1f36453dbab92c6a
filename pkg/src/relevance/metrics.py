"""Covering, error and the relevance scores built on them.

All scores are ratios of exact integer counts, divided once at the end.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..dataset import Dataset
from ..logger import get_logger
from ..rules import Rule, remove_feature, rule_mask

logger = get_logger(__name__)


@dataclass(frozen=True)
class CoverCounts:
    """Integer counts behind covering and error for one antecedent and class."""
    covered_in_class: int     # |D^k ∩ D_i|
    covered_off_class: int    # |D^k ∩ D_i'|
    in_class: int             # |D_i|
    off_class: int            # |D_i'|

    @property
    def covered(self) -> int:
        return self.covered_in_class + self.covered_off_class

    @property
    def total(self) -> int:
        return self.in_class + self.off_class


def count_cover(mask: np.ndarray, class_mask: np.ndarray) -> CoverCounts:
    return CoverCounts(
        covered_in_class=int(np.count_nonzero(mask & class_mask)),
        covered_off_class=int(np.count_nonzero(mask & ~class_mask)),
        in_class=int(np.count_nonzero(class_mask)),
        off_class=int(np.count_nonzero(~class_mask)),
    )


def covering_from_counts(counts: CoverCounts) -> float:
    if counts.in_class == 0:
        logger.debug("covering: consequent class has no samples, returning 0")
        return 0.0
    return counts.covered_in_class / counts.in_class


def error_from_counts(counts: CoverCounts) -> float:
    if counts.off_class == 0:
        logger.debug("error: no samples outside the consequent class, returning 0")
        return 0.0
    return counts.covered_off_class / counts.off_class


def rule_counts(ds: Dataset, r: Rule) -> CoverCounts:
    return count_cover(rule_mask(r, ds), ds.class_mask(r.consequent))


def covering(ds: Dataset, r: Rule) -> float:
    """|D^k ∩ D_i| / |D_i| with t_i the rule's consequent; 0 when D_i is empty."""
    return covering_from_counts(rule_counts(ds, r))


def error(ds: Dataset, r: Rule) -> float:
    """|D^k ∩ D_i'| / |D_i'|; 0 when D_i' is empty."""
    return error_from_counts(rule_counts(ds, r))


def rule_relevance_from_counts(counts: CoverCounts) -> float:
    return covering_from_counts(counts) * (1.0 - error_from_counts(counts))


def rule_relevance(ds: Dataset, r: Rule) -> float:
    """covering(R) * (1 - error(R))."""
    return rule_relevance_from_counts(rule_counts(ds, r))


def feature_relevance_from_counts(full: CoverCounts, reduced: CoverCounts) -> float:
    return (error_from_counts(reduced) - error_from_counts(full)) * covering_from_counts(full)


def feature_relevance(ds: Dataset, v: str, r: Rule) -> float:
    """
    Error increase caused by removing the conditions on ``v``, scaled by
    covering: (error(R_-v) - error(R)) * covering(R). Zero when v is not
    tested by the rule.
    """
    if v not in r.features:
        return 0.0
    return feature_relevance_from_counts(rule_counts(ds, r), rule_counts(ds, remove_feature(r, v)))


@dataclass(frozen=True)
class RuleMetrics:
    """Association-rule quality measures of one rule."""
    support: float
    confidence: float
    lift: float

    def as_dict(self) -> Dict[str, float]:
        return {"support": self.support, "confidence": self.confidence, "lift": self.lift}


def alt_metrics_from_counts(counts: CoverCounts) -> RuleMetrics:
    d = counts.total
    support = counts.covered_in_class / d
    confidence = counts.covered_in_class / counts.covered if counts.covered else 0.0
    if counts.in_class == 0:
        lift = 0.0
    else:
        lift = confidence / (counts.in_class / d)
    return RuleMetrics(support=support, confidence=confidence, lift=lift)


def alt_rule_metrics(ds: Dataset, r: Rule) -> RuleMetrics:
    """
    support = |D^k ∩ D_i| / d, confidence = |D^k ∩ D_i| / |D^k| (0 when
    nothing is covered), lift = confidence / (|D_i| / d) (0 when D_i is empty).
    """
    return alt_metrics_from_counts(rule_counts(ds, r))


def gini_impurity(class_counts: np.ndarray) -> float:
    total = int(class_counts.sum())
    if total == 0:
        return 0.0
    fractions = class_counts / total
    return float(1.0 - np.sum(fractions * fractions))


def class_histogram(ds: Dataset, mask: np.ndarray) -> np.ndarray:
    covered = ds.targets[mask]
    return np.asarray([np.count_nonzero(covered == label) for label in ds.class_labels], dtype=np.int64)


def impurity_gain_from_masks(ds: Dataset, full_mask: np.ndarray, reduced_mask: np.ndarray) -> float:
    n_covered = int(np.count_nonzero(full_mask))
    if n_covered == 0:
        return 0.0
    gain = gini_impurity(class_histogram(ds, reduced_mask)) - gini_impurity(class_histogram(ds, full_mask))
    return max(gain, 0.0) * (n_covered / ds.n_samples)


def impurity_gain_relevance(ds: Dataset, v: str, r: Rule) -> float:
    """
    Gini impurity over covered_set(R_-v) minus Gini impurity over
    covered_set(R), floored at 0 and weighted by |covered_set(R)| / d.
    """
    if v not in r.features:
        return 0.0
    return impurity_gain_from_masks(ds, rule_mask(r, ds), rule_mask(remove_feature(r, v), ds))
