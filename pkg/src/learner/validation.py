"""Stratified nested cross-validation of trees and their rule sets."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from sklearn.metrics import accuracy_score, f1_score
from sklearn.model_selection import StratifiedKFold

from ..config import TreeParams, ValidationConfig
from ..dataset import Dataset
from ..logger import get_logger
from ..reporting import FoldRecord, TrainingSummary
from ..rules import RuleSet, tree_to_rules
from .tree import DecisionTree, fit_tree

logger = get_logger(__name__)


@dataclass
class FoldResult:
    fold: int
    params: TreeParams
    tree: DecisionTree
    rules: RuleSet
    accuracy: float
    macro_f1: float
    train_indices: np.ndarray
    test_indices: np.ndarray


@dataclass
class CrossValidationResult:
    dataset: str
    seed: int
    outer_folds: int
    folds: List[FoldResult]

    @property
    def accuracies(self) -> List[float]:
        return [f.accuracy for f in self.folds]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies))

    def summary(self, rules_files: Optional[Sequence[str]] = None) -> TrainingSummary:
        records = [
            FoldRecord(
                fold=f.fold,
                params=f.params.label(),
                accuracy=f.accuracy,
                macro_f1=f.macro_f1,
                n_rules=len(f.rules),
                n_train=len(f.train_indices),
                n_test=len(f.test_indices),
                rules_file=rules_files[i] if rules_files else None,
            )
            for i, f in enumerate(self.folds)
        ]
        return TrainingSummary(dataset=self.dataset, seed=self.seed, outer_folds=self.outer_folds, folds=records)


def stratified_folds(ds: Dataset, k: int, seed: int):
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    return list(splitter.split(np.zeros(ds.n_samples), ds.targets.tolist()))


def check_fold_counts(ds: Dataset, k: int) -> None:
    """
    Raises:
        ValueError: Some class has fewer samples than folds
    """
    small = {label: n for label, n in ds.class_counts().items() if n < k}
    if small:
        raise ValueError(
            f"classes {small} have fewer samples than the {k} folds requested; "
            f"lower the fold count or merge rare classes"
        )


def _accuracy(tree: DecisionTree, ds: Dataset) -> float:
    return float(accuracy_score(ds.targets.tolist(), tree.predict_dataset(ds).tolist()))


def select_params(ds: Dataset, grid: Sequence[TreeParams], inner_folds: int, seed: int) -> TreeParams:
    """
    Grid point with the best mean inner-fold accuracy; ties go to the first
    grid point. Inner folds shrink to the smallest class size when needed.
    """
    if len(grid) == 1:
        return grid[0]
    k = min(inner_folds, min(ds.class_counts().values()))
    if k < 2:
        logger.warning(f"Too few samples per class for inner folds on {ds.n_samples} rows, using {grid[0].label()}")
        return grid[0]

    splits = stratified_folds(ds, k, seed)
    best, best_score = grid[0], -np.inf
    for params in grid:
        scores = [_accuracy(fit_tree(ds.subset(tr), params), ds.subset(te)) for tr, te in splits]
        score = float(np.mean(scores))
        if score > best_score:
            best, best_score = params, score
    return best


def _run_fold(ds: Dataset, fold: int, train_idx, test_idx, config: ValidationConfig, seed: int) -> FoldResult:
    train, test = ds.subset(train_idx), ds.subset(test_idx)
    params = select_params(train, config.grid.combinations(), config.inner_folds, seed + fold + 1)
    tree = fit_tree(train, params)
    predicted = tree.predict_dataset(test).tolist()
    truth = test.targets.tolist()
    accuracy = float(accuracy_score(truth, predicted))
    macro_f1 = float(f1_score(truth, predicted, labels=list(ds.class_labels), average="macro", zero_division=0))
    logger.info(f"Fold {fold}: {params.label()} accuracy={accuracy:.4f} macro_f1={macro_f1:.4f}")
    return FoldResult(
        fold=fold,
        params=params,
        tree=tree,
        rules=tree_to_rules(tree),
        accuracy=accuracy,
        macro_f1=macro_f1,
        train_indices=np.asarray(train_idx),
        test_indices=np.asarray(test_idx),
    )


def cross_validate(
    ds: Dataset,
    config: Optional[ValidationConfig] = None,
    seed: int = 0,
    jobs: int = 1,
) -> CrossValidationResult:
    """
    Nested cross-validation: stratified outer folds, inner grid search on
    accuracy, one tree and derived rule set per outer fold.

    Args:
        ds: Full dataset
        config: Fold counts and hyperparameter grid
        seed: Shuffling seed; inner searches of fold k use seed + k + 1
        jobs: Outer folds trained in parallel; results keep fold order

    Raises:
        ValueError: A class has fewer samples than outer folds
    """
    config = config or ValidationConfig()
    check_fold_counts(ds, config.outer_folds)
    splits = stratified_folds(ds, config.outer_folds, seed)
    logger.info(f"Cross-validating {ds.name or 'dataset'}: {config.outer_folds} folds, {len(config.grid.combinations())} grid points")

    if jobs != 1:
        folds = Parallel(n_jobs=jobs)(
            delayed(_run_fold)(ds, i, tr, te, config, seed) for i, (tr, te) in enumerate(splits, 1)
        )
    else:
        folds = [_run_fold(ds, i, tr, te, config, seed) for i, (tr, te) in enumerate(splits, 1)]

    return CrossValidationResult(dataset=ds.name, seed=seed, outer_folds=config.outer_folds, folds=list(folds))
