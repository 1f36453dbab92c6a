from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .projection import TOTAL_WEIGHT


class GraphMismatchError(ValueError):
    """Graphs disagree on feature set or metric provenance."""


@dataclass(frozen=True, eq=False)
class FeatureGraph:
    """
    Weighted undirected feature graph with self-edges.

    ``adjacency`` sums to 100 unless ``is_zero`` is set, in which case every
    entry is 0. ``raw_total`` keeps the pre-normalization sum so graphs can be
    put on a shared scale.
    """
    adjacency: np.ndarray
    feature_names: Tuple[str, ...]
    class_filter: Optional[str] = None
    metric_tags: Tuple[str, str] = ("error-increase", "covering-error")
    is_zero: bool = False
    raw_total: float = 0.0
    n_rules: int = 0
    source: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        adjacency = np.array(self.adjacency, dtype=np.float64, copy=True)
        names = tuple(self.feature_names)
        if adjacency.shape != (len(names), len(names)):
            raise ValueError(f"adjacency shape {adjacency.shape} does not match {len(names)} features")
        adjacency.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "metric_tags", tuple(self.metric_tags))

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def total_weight(self) -> float:
        return 0.0 if self.is_zero else TOTAL_WEIGHT

    def aligned(self, feature_names: Sequence[str]) -> np.ndarray:
        """Adjacency permuted into ``feature_names`` order."""
        if set(feature_names) != set(self.feature_names) or len(feature_names) != self.n_features:
            missing = sorted(set(feature_names) - set(self.feature_names))
            extra = sorted(set(self.feature_names) - set(feature_names))
            raise GraphMismatchError(f"feature sets differ: missing {missing}, extra {extra}")
        index = [self.feature_names.index(name) for name in feature_names]
        return self.adjacency[np.ix_(index, index)]

    def weight(self, a: str, b: str) -> float:
        return float(self.adjacency[self.feature_names.index(a), self.feature_names.index(b)])
