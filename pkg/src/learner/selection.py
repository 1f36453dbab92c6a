"""Top-k feature selection followed by retraining."""

from typing import Optional

from ..config import ValidationConfig
from ..dataset import Dataset
from ..logger import get_logger
from ..reporting import ImportanceReport, TopKResult
from .validation import cross_validate

logger = get_logger(__name__)


def topk_evaluation(
    ds: Dataset,
    report: ImportanceReport,
    k: int,
    config: Optional[ValidationConfig] = None,
    seed: int = 0,
    jobs: int = 1,
) -> TopKResult:
    """
    Keep the k best-ranked features of ``report`` and cross-validate trees
    retrained on them. k above the feature count is clamped with a warning.

    Raises:
        ValueError: k < 1, or report features are not in ``ds``
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = len(report.feature_names)
    effective = k
    if k > m:
        logger.warning(f"top-k {k} exceeds the {m} available features, clamping to {m}")
        effective = m

    features = report.top(effective)
    result = cross_validate(ds.select_features(features), config, seed=seed, jobs=jobs)
    return TopKResult(
        method=report.method,
        k=effective,
        requested_k=k,
        features=features,
        fold_accuracies=result.accuracies,
    )
