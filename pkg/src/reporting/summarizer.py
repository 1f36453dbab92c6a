from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np


def rank_features(scores: Sequence[float]) -> Tuple[int, ...]:
    """Feature indices by descending score; ties keep declaration order."""
    values = [float(s) for s in scores]
    return tuple(sorted(range(len(values)), key=lambda i: (-values[i], i)))


@dataclass(frozen=True, eq=False)
class ImportanceReport:
    method: str  # graph-centrality | gini | permutation | frequency
    feature_names: Tuple[str, ...]
    scores: np.ndarray
    is_zero: bool = False  # zero graph / no splits: ranking carries no information
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.shape != (len(self.feature_names),):
            raise ValueError(
                f"{len(self.feature_names)} features but {scores.shape[0] if scores.ndim else 0} scores"
            )
        if not np.all(np.isfinite(scores)):
            raise ValueError(f"importance scores must be finite ({self.method})")
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "scores", scores)

    @property
    def order(self) -> Tuple[int, ...]:
        return rank_features(self.scores)

    @property
    def ranking(self) -> Tuple[str, ...]:
        """Feature names, most important first."""
        return tuple(self.feature_names[i] for i in self.order)

    @property
    def ranks(self) -> np.ndarray:
        """1-based rank of each feature in declaration order."""
        ranks = np.empty(len(self.feature_names), dtype=np.int64)
        for position, index in enumerate(self.order, 1):
            ranks[index] = position
        return ranks

    def score_of(self, feature: str) -> float:
        return float(self.scores[self.feature_names.index(feature)])

    def top(self, k: int) -> Tuple[str, ...]:
        return self.ranking[:max(k, 0)]

    def as_dict(self) -> Dict[str, float]:
        return {name: float(score) for name, score in zip(self.feature_names, self.scores)}


@dataclass
class FoldRecord:
    fold: int
    params: str
    accuracy: float
    macro_f1: float
    n_rules: int
    n_train: int
    n_test: int
    rules_file: Optional[str] = None


@dataclass
class TrainingSummary:
    dataset: str
    seed: int
    outer_folds: int
    folds: List[FoldRecord] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([f.accuracy for f in self.folds])) if self.folds else 0.0

    @property
    def mean_f1(self) -> float:
        return float(np.mean([f.macro_f1 for f in self.folds])) if self.folds else 0.0


@dataclass
class StabilityTable:
    model_labels: List[str]
    mean_rho: Dict[str, float] = field(default_factory=dict)  # method -> mean pairwise Spearman
    rankings: Dict[str, List[Tuple[str, ...]]] = field(default_factory=dict)  # method -> ranking per model

    @property
    def n_models(self) -> int:
        return len(self.model_labels)


@dataclass
class TopKResult:
    method: str
    k: int
    requested_k: int
    features: Tuple[str, ...]
    fold_accuracies: List[float] = field(default_factory=list)

    @property
    def clamped(self) -> bool:
        return self.k != self.requested_k

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies)) if self.fold_accuracies else 0.0
