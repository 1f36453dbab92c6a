"""Baseline feature importances: Gini, permutation and antecedent frequency."""

from typing import Optional, Protocol, Sequence

import numpy as np
from joblib import Parallel, delayed
from sklearn.metrics import accuracy_score

from ..dataset import Dataset
from ..logger import get_logger
from ..reporting import ImportanceReport
from ..rules import RuleSet
from .tree import DecisionTree

logger = get_logger(__name__)

GINI_METHOD = "gini"
PERMUTATION_METHOD = "permutation"
FREQUENCY_METHOD = "frequency"


class Predictor(Protocol):
    def predict_dataset(self, ds: Dataset) -> np.ndarray: ...


def gini_importance(tree: DecisionTree, ds: Optional[Dataset] = None) -> ImportanceReport:
    """
    Per-feature sum of weighted impurity decreases over the tree's splits,
    normalized to sum to 1. Features never split on score 0.

    Args:
        tree: Fitted tree
        ds: When given, scores are reported in this dataset's feature order
    """
    names = ds.feature_names if ds is not None else tree.feature_names
    scores = np.zeros(len(names), dtype=np.float64)
    position = {name: i for i, name in enumerate(names)}
    for node in tree.nodes():
        if not node.is_leaf and node.feature in position:
            scores[position[node.feature]] += node.improvement

    total = scores.sum()
    if total > 0:
        scores = scores / total
    return ImportanceReport(method=GINI_METHOD, feature_names=names, scores=scores, is_zero=bool(total <= 0))


def _column_drop(
    predictor: Predictor,
    ds: Dataset,
    feature: str,
    baseline: float,
    repeats: int,
    seed_seq: np.random.SeedSequence,
) -> float:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    column = ds.column(feature)
    drops = []
    for _ in range(repeats):
        shuffled = ds.with_column(feature, column[rng.permutation(ds.n_samples)])
        drops.append(baseline - accuracy_score(ds.targets.tolist(), predictor.predict_dataset(shuffled).tolist()))
    return float(np.mean(drops))


def permutation_importance(
    predictor: Predictor,
    ds: Dataset,
    repeats: int = 10,
    seed: int = 0,
    jobs: int = 1,
) -> ImportanceReport:
    """
    Mean accuracy drop over ``repeats`` within-column shuffles per feature.

    Each feature draws from its own PCG64 stream spawned from ``seed``, so
    results do not depend on ``jobs``.

    Raises:
        ValueError: repeats < 1
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    baseline = float(accuracy_score(ds.targets.tolist(), predictor.predict_dataset(ds).tolist()))
    streams = np.random.SeedSequence(seed).spawn(ds.n_features)

    if jobs != 1:
        drops = Parallel(n_jobs=jobs, prefer="threads")(
            delayed(_column_drop)(predictor, ds, f, baseline, repeats, s)
            for f, s in zip(ds.feature_names, streams)
        )
    else:
        drops = [_column_drop(predictor, ds, f, baseline, repeats, s) for f, s in zip(ds.feature_names, streams)]

    logger.debug(f"Permutation importance: baseline accuracy {baseline:.4f}, {repeats} repeats")
    return ImportanceReport(
        method=PERMUTATION_METHOD,
        feature_names=ds.feature_names,
        scores=np.asarray(drops, dtype=np.float64),
        metadata={"baseline_accuracy": baseline, "repeats": repeats, "seed": seed},
    )


def frequency_importance(rs: RuleSet, feature_names: Sequence[str]) -> ImportanceReport:
    """Share of rule antecedents testing each feature, normalized to sum to 1."""
    counts = np.asarray(rs.summary().occurrence_vector(list(feature_names)), dtype=np.float64)
    total = counts.sum()
    scores = counts / total if total > 0 else counts
    return ImportanceReport(
        method=FREQUENCY_METHOD,
        feature_names=tuple(feature_names),
        scores=scores,
        is_zero=bool(total <= 0),
        metadata={"n_rules": len(rs)},
    )
