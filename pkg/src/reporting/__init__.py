from .summarizer import (
    FoldRecord,
    ImportanceReport,
    StabilityTable,
    TopKResult,
    TrainingSummary,
    rank_features,
)
from .formatters import (
    format_distance_csv,
    format_distance_json,
    format_distance_text,
    format_importance_csv,
    format_importance_json,
    format_importance_text,
    format_stability_csv,
    format_stability_json,
    format_stability_text,
    format_topk_json,
    format_topk_text,
    format_training_json,
    format_training_text,
)

__all__ = [
    "FoldRecord",
    "ImportanceReport",
    "StabilityTable",
    "TopKResult",
    "TrainingSummary",
    "rank_features",
    "format_distance_csv",
    "format_distance_json",
    "format_distance_text",
    "format_importance_csv",
    "format_importance_json",
    "format_importance_text",
    "format_stability_csv",
    "format_stability_json",
    "format_stability_text",
    "format_topk_json",
    "format_topk_text",
    "format_training_json",
    "format_training_text",
]
