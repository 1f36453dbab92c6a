"""Rank stability of importance methods across trees."""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import spearmanr

from ..config import AnalysisConfig, TreeParams
from ..dataset import Dataset
from ..graph import CENTRALITY_METHOD, build_graph, feature_importance
from ..logger import get_logger
from ..reporting import ImportanceReport, StabilityTable
from ..rules import RuleSet, tree_to_rules
from .importance import (
    FREQUENCY_METHOD,
    GINI_METHOD,
    PERMUTATION_METHOD,
    frequency_importance,
    gini_importance,
    permutation_importance,
)
from .tree import DecisionTree, fit_tree
from .validation import stratified_folds, check_fold_counts

logger = get_logger(__name__)

IMPORTANCE_METHODS = (CENTRALITY_METHOD, GINI_METHOD, PERMUTATION_METHOD, FREQUENCY_METHOD)
METHOD_ALIASES = {"graph": CENTRALITY_METHOD, "centrality": CENTRALITY_METHOD}


def resolve_method(name: str) -> str:
    method = METHOD_ALIASES.get(name, name)
    if method not in IMPORTANCE_METHODS:
        raise ValueError(f"Unknown importance method: {name}. Valid: {['graph', *IMPORTANCE_METHODS[1:]]}")
    return method


def spearman(rank_a: Sequence[float], rank_b: Sequence[float]) -> float:
    """
    Spearman rho with average ranks for ties. Identical inputs give 1.0; a
    constant input (undefined rho) gives 0.0.

    Raises:
        ValueError: Lengths differ or fewer than 2 entries
    """
    a = np.asarray(rank_a, dtype=np.float64)
    b = np.asarray(rank_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"rankings differ in length: {a.size} vs {b.size}")
    if a.size < 2:
        raise ValueError("spearman needs at least 2 entries")
    if np.array_equal(a, b):
        return 1.0
    rho = spearmanr(a, b).correlation
    return 0.0 if np.isnan(rho) else float(rho)


def mean_pairwise_spearman(vectors: Sequence[Sequence[float]]) -> float:
    """Mean rho over all unordered pairs of score vectors."""
    if len(vectors) < 2:
        raise ValueError(f"need at least 2 models to compare, got {len(vectors)}")
    return float(np.mean([spearman(a, b) for a, b in itertools.combinations(vectors, 2)]))


@dataclass
class _Model:
    label: str
    tree: DecisionTree
    rules: RuleSet
    train: Dataset


def importance_for(
    method: str,
    model_tree: DecisionTree,
    rules: RuleSet,
    ds: Dataset,
    analysis: Optional[AnalysisConfig] = None,
    seed: int = 0,
    jobs: int = 1,
) -> ImportanceReport:
    """One importance method on one fitted tree and its rule set."""
    analysis = analysis or AnalysisConfig()
    method = resolve_method(method)
    if method == CENTRALITY_METHOD:
        graph = build_graph(
            ds,
            rules,
            feature_metric=analysis.feature_metric,
            rule_metric=analysis.rule_metric,
            log_space_threshold=analysis.log_space_threshold,
            jobs=jobs,
        )
        return feature_importance(graph)
    if method == GINI_METHOD:
        return gini_importance(model_tree, ds)
    if method == PERMUTATION_METHOD:
        return permutation_importance(model_tree, ds, analysis.permutation_repeats, seed, jobs)
    return frequency_importance(rules, ds.feature_names)


def _depth_models(ds: Dataset, depths: Sequence[Optional[int]], params: TreeParams) -> List[_Model]:
    models = []
    for depth in depths:
        tree = fit_tree(ds, params.model_copy(update={"max_depth": depth}))
        label = f"depth={'none' if depth is None else depth}"
        models.append(_Model(label, tree, tree_to_rules(tree), ds))
    return models


def _fold_models(ds: Dataset, folds: int, params: TreeParams, seed: int) -> List[_Model]:
    check_fold_counts(ds, folds)
    models = []
    for i, (train_idx, _) in enumerate(stratified_folds(ds, folds, seed), 1):
        train = ds.subset(train_idx)
        tree = fit_tree(train, params)
        models.append(_Model(f"fold{i}", tree, tree_to_rules(tree), train))
    return models


def stability_report(
    ds: Dataset,
    depths: Optional[Sequence[Optional[int]]] = None,
    folds: Optional[int] = None,
    methods: Sequence[str] = (CENTRALITY_METHOD, GINI_METHOD),
    params: Optional[TreeParams] = None,
    analysis: Optional[AnalysisConfig] = None,
    seed: int = 0,
    jobs: int = 1,
) -> StabilityTable:
    """
    Train one tree per depth (on all of ``ds``) or per training fold, rank
    features with each method and report the mean pairwise Spearman rho.

    Exactly one of ``depths`` and ``folds`` must be given. With ``jobs`` != 1
    the models are scored in parallel; results keep model order.

    Raises:
        ValueError: Fewer than two models, or both/neither of depths and folds
    """
    if (depths is None) == (folds is None):
        raise ValueError("give exactly one of depths or folds")
    params = params or TreeParams()
    if depths is not None:
        if len(depths) < 2:
            raise ValueError(f"need at least 2 models to compare, got {len(depths)} depth(s)")
        models = _depth_models(ds, depths, params)
    else:
        if folds < 2:
            raise ValueError(f"need at least 2 models to compare, got {folds} fold(s)")
        models = _fold_models(ds, folds, params, seed)

    resolved: Tuple[str, ...] = tuple(dict.fromkeys(resolve_method(m) for m in methods))
    table = StabilityTable(model_labels=[m.label for m in models])
    for method in resolved:
        if jobs != 1:
            reports = Parallel(n_jobs=jobs, prefer="threads")(
                delayed(importance_for)(method, m.tree, m.rules, m.train, analysis, seed) for m in models
            )
        else:
            reports = [importance_for(method, m.tree, m.rules, m.train, analysis, seed) for m in models]
        table.mean_rho[method] = mean_pairwise_spearman([r.scores for r in reports])
        table.rankings[method] = [r.ranking for r in reports]
        logger.info(f"Stability {method}: mean rho {table.mean_rho[method]:.4f} over {len(models)} models")
    return table
