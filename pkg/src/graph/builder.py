"""Feature graphs from rule sets, plus distance, averaging and importance."""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..dataset import Dataset
from ..logger import get_logger
from ..relevance import RelevanceResult, relevance_matrix
from ..relevance.matrix import DEFAULT_FEATURE_METRIC, DEFAULT_RULE_METRIC
from ..reporting import ImportanceReport
from ..rules import RuleSet
from .model import FeatureGraph, GraphMismatchError
from .projection import LOG_SPACE_THRESHOLD, normalize, project

logger = get_logger(__name__)

CENTRALITY_METHOD = "graph-centrality"


def graph_from_relevance(
    result: RelevanceResult,
    class_filter: Optional[str] = None,
    log_space_threshold: int = LOG_SPACE_THRESHOLD,
    source: str = "",
) -> FeatureGraph:
    """
    Project a relevance result, optionally restricted to the rules whose
    consequent is ``class_filter``, and normalize to total weight 100.
    """
    if class_filter is None:
        rows = np.arange(result.n_rules)
    else:
        rows = np.asarray([k for k, c in enumerate(result.consequents) if c == class_filter], dtype=np.int64)

    raw = project(result.P[rows], result.q[rows], log_space_threshold=log_space_threshold)
    adjacency, is_zero = normalize(raw)
    if is_zero:
        scope = f"class '{class_filter}'" if class_filter is not None else "rule set"
        logger.warning(f"Zero graph for {scope} ({len(rows)} rules): all projected weights are 0")

    return FeatureGraph(
        adjacency=adjacency,
        feature_names=result.feature_names,
        class_filter=class_filter,
        metric_tags=result.metric_tags,
        is_zero=is_zero,
        raw_total=float(raw.sum()),
        n_rules=len(rows),
        source=source,
    )


def build_graph(
    ds: Dataset,
    rs: RuleSet,
    class_filter: Optional[str] = None,
    feature_metric: str = DEFAULT_FEATURE_METRIC,
    rule_metric: str = DEFAULT_RULE_METRIC,
    log_space_threshold: int = LOG_SPACE_THRESHOLD,
    jobs: int = 1,
) -> FeatureGraph:
    """
    Build the (optionally class-specific) normalized feature graph of a rule set.

    Raises:
        DatasetError: ``class_filter`` is not a class of ``ds``
        RuleEvaluationError: Rules do not fit the dataset schema
    """
    if class_filter is not None:
        ds.class_mask(class_filter)
        subset = rs.for_class(class_filter)
    else:
        subset = rs
    result = relevance_matrix(ds, subset, feature_metric, rule_metric, jobs=jobs)
    return graph_from_relevance(result, class_filter, log_space_threshold, source=rs.source)


def build_class_graphs(
    ds: Dataset,
    rs: RuleSet,
    feature_metric: str = DEFAULT_FEATURE_METRIC,
    rule_metric: str = DEFAULT_RULE_METRIC,
    log_space_threshold: int = LOG_SPACE_THRESHOLD,
    jobs: int = 1,
) -> Dict[str, FeatureGraph]:
    """One class-specific graph per class label, in class-label order."""
    return {
        label: build_graph(ds, rs, label, feature_metric, rule_metric, log_space_threshold, jobs)
        for label in ds.class_labels
    }


def _check_comparable(g1: FeatureGraph, g2: FeatureGraph) -> None:
    if g1.metric_tags != g2.metric_tags:
        raise GraphMismatchError(f"metric tags differ: {list(g1.metric_tags)} vs {list(g2.metric_tags)}")


def graph_distance(g1: FeatureGraph, g2: FeatureGraph) -> float:
    """
    Frobenius norm of the difference of two graphs, aligned by feature name.

    Raises:
        GraphMismatchError: Feature sets or metric tags differ
    """
    _check_comparable(g1, g2)
    diff = g1.adjacency - g2.aligned(g1.feature_names)
    return float(np.linalg.norm(diff, "fro"))


def distance_matrix(graphs: Sequence[FeatureGraph]) -> np.ndarray:
    """Symmetric k x k pairwise distances with a zero diagonal."""
    k = len(graphs)
    distances = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            distances[i, j] = distances[j, i] = graph_distance(graphs[i], graphs[j])
    return distances


def average_graphs(graphs: Sequence[FeatureGraph]) -> FeatureGraph:
    """Entrywise mean of aligned graphs, renormalized to 100."""
    if not graphs:
        raise ValueError("average_graphs needs at least one graph")
    first = graphs[0]
    for other in graphs[1:]:
        _check_comparable(first, other)
    stacked = np.stack([g.aligned(first.feature_names) for g in graphs])
    mean = stacked.mean(axis=0)
    upper = np.triu(mean)
    adjacency, is_zero = normalize(upper + np.triu(upper, 1).T)
    classes = {g.class_filter for g in graphs}
    return FeatureGraph(
        adjacency=adjacency,
        feature_names=first.feature_names,
        class_filter=first.class_filter if len(classes) == 1 else None,
        metric_tags=first.metric_tags,
        is_zero=is_zero,
        raw_total=float(mean.sum()),
        n_rules=sum(g.n_rules for g in graphs),
        source="average",
        metadata={"n_graphs": len(graphs)},
    )


def weight_split(g: FeatureGraph, features: Iterable[str]) -> Tuple[float, float]:
    """
    (self-edge weight, edge weight to other features) summed over the rows
    of ``features``.
    """
    index: List[int] = [g.feature_names.index(f) for f in features]
    if not index:
        return 0.0, 0.0
    rows = g.adjacency[index]
    diagonal = float(sum(g.adjacency[i, i] for i in index))
    return diagonal, float(rows.sum()) - diagonal


def feature_importance(g: FeatureGraph) -> ImportanceReport:
    """Row-sum degree centrality; scores sum to 100 for non-zero graphs."""
    return ImportanceReport(
        method=CENTRALITY_METHOD,
        feature_names=g.feature_names,
        scores=g.adjacency.sum(axis=1),
        is_zero=g.is_zero,
        metadata={"class_filter": g.class_filter, "metric_tags": list(g.metric_tags)},
    )
