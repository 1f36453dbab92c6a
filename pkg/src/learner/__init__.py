"""Tree induction, baseline importances, rule set prediction and validation."""

from .tree import DecisionTree, TreeNode, fit_tree, load_tree, save_tree, tree_from_json, tree_to_json
from .importance import (
    FREQUENCY_METHOD,
    GINI_METHOD,
    PERMUTATION_METHOD,
    frequency_importance,
    gini_importance,
    permutation_importance,
)
from .predict import RuleSetClassifier, ruleset_predict
from .validation import CrossValidationResult, FoldResult, check_fold_counts, cross_validate, select_params
from .stability import (
    IMPORTANCE_METHODS,
    importance_for,
    mean_pairwise_spearman,
    resolve_method,
    spearman,
    stability_report,
)
from .selection import topk_evaluation

__all__ = [
    "DecisionTree",
    "TreeNode",
    "fit_tree",
    "load_tree",
    "save_tree",
    "tree_from_json",
    "tree_to_json",
    "FREQUENCY_METHOD",
    "GINI_METHOD",
    "PERMUTATION_METHOD",
    "frequency_importance",
    "gini_importance",
    "permutation_importance",
    "RuleSetClassifier",
    "ruleset_predict",
    "CrossValidationResult",
    "FoldResult",
    "check_fold_counts",
    "cross_validate",
    "select_params",
    "IMPORTANCE_METHODS",
    "importance_for",
    "mean_pairwise_spearman",
    "resolve_method",
    "spearman",
    "stability_report",
    "topk_evaluation",
]
