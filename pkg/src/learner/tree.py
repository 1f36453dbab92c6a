"""CART-style binary classification tree with Gini splits."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..config import TreeParams
from ..dataset import ColumnKind, Dataset, DatasetError
from ..logger import get_logger

logger = get_logger(__name__)

# Improvements closer than this are treated as ties
TIE_EPS = 1e-12


def _gini_rows(counts: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Gini impurity of each row of a (k x r) class-count matrix."""
    safe = np.where(sizes > 0, sizes, 1).astype(np.float64)
    fractions = counts / safe[:, None]
    return 1.0 - np.sum(fractions * fractions, axis=1)


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    fractions = counts / total
    return float(1.0 - np.sum(fractions * fractions))


@dataclass
class TreeNode:
    """
    Internal nodes route ``x <= threshold`` (numeric) or ``x == category``
    (categorical) to ``left``; leaves only carry class counts.
    """
    class_counts: np.ndarray
    impurity: float
    depth: int
    feature: Optional[str] = None
    threshold: Optional[float] = None
    category: Optional[str] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    improvement: float = 0.0  # weighted impurity decrease of this split

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def n_samples(self) -> int:
        return int(self.class_counts.sum())

    @property
    def majority_index(self) -> int:
        return int(np.argmax(self.class_counts))

    def goes_left(self, value: Any) -> bool:
        if self.category is not None:
            return str(value).strip() == self.category
        return float(value) <= self.threshold


@dataclass
class _Split:
    feature_index: int
    improvement: float
    left_mask: np.ndarray
    threshold: Optional[float] = None
    category: Optional[str] = None


class DecisionTree:
    """Fitted tree plus the schema it was trained on."""

    def __init__(
        self,
        root: TreeNode,
        feature_names: Tuple[str, ...],
        column_kinds: Tuple[ColumnKind, ...],
        class_labels: Tuple[str, ...],
        params: TreeParams,
    ):
        self.root = root
        self.feature_names = tuple(feature_names)
        self.column_kinds = tuple(ColumnKind(k) for k in column_kinds)
        self.class_labels = tuple(class_labels)
        self.params = params

    def nodes(self) -> List[TreeNode]:
        """All nodes in left-first depth-first order."""
        out: List[TreeNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def leaves(self) -> List[TreeNode]:
        return [node for node in self.nodes() if node.is_leaf]

    @property
    def n_leaves(self) -> int:
        return len(self.leaves())

    @property
    def depth(self) -> int:
        return max(node.depth for node in self.leaves())

    def predict(self, sample: Mapping[str, Any]) -> str:
        node = self.root
        while not node.is_leaf:
            node = node.left if node.goes_left(sample[node.feature]) else node.right
        return self.class_labels[node.majority_index]

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        """Predicted labels for every sample of ``ds`` (object array)."""
        missing = [f for f in self.feature_names if not ds.has_feature(f)]
        if missing:
            raise DatasetError(f"dataset lacks tree features: {missing}")
        out = np.empty(ds.n_samples, dtype=object)
        stack = [(self.root, np.arange(ds.n_samples))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = self.class_labels[node.majority_index]
                continue
            values = ds.column(node.feature)[idx]
            if node.category is not None:
                mask = values == node.category
            else:
                mask = values.astype(np.float64) <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return out

    def __repr__(self) -> str:
        return f"DecisionTree(leaves={self.n_leaves}, depth={self.depth}, {self.params.label()})"


class _Builder:
    def __init__(self, ds: Dataset, params: TreeParams):
        self.ds = ds
        self.params = params
        self.labels = ds.class_labels
        label_index = {label: i for i, label in enumerate(self.labels)}
        self.y = np.asarray([label_index[t] for t in ds.targets], dtype=np.int64)
        self.onehot = np.eye(len(self.labels), dtype=np.int64)[self.y]
        self.columns = [ds.column(f) for f in ds.feature_names]
        self.kinds = ds.column_kinds
        self.n_total = ds.n_samples

    def build(self, idx: np.ndarray, depth: int) -> TreeNode:
        counts = self.onehot[idx].sum(axis=0)
        impurity = _gini(counts)
        node = TreeNode(class_counts=counts, impurity=impurity, depth=depth)

        if impurity == 0.0:
            return node
        if self.params.max_depth is not None and depth >= self.params.max_depth:
            return node
        if idx.size < 2 * self.params.min_samples_leaf:
            return node

        split = self._best_split(idx, counts, impurity)
        if split is None:
            return node
        weighted = split.improvement * idx.size / self.n_total
        if weighted + TIE_EPS < self.params.min_impurity_decrease:
            return node

        node.feature = self.ds.feature_names[split.feature_index]
        node.threshold = split.threshold
        node.category = split.category
        node.improvement = weighted
        node.left = self.build(idx[split.left_mask], depth + 1)
        node.right = self.build(idx[~split.left_mask], depth + 1)
        return node

    def _score(self, left_counts: np.ndarray, total: np.ndarray, impurity: float) -> Tuple[np.ndarray, np.ndarray]:
        """Impurity decrease per candidate and a mask of candidates honouring min_samples_leaf."""
        n = total.sum()
        left_sizes = left_counts.sum(axis=1)
        right_counts = total[None, :] - left_counts
        right_sizes = n - left_sizes
        child = (left_sizes * _gini_rows(left_counts, left_sizes) + right_sizes * _gini_rows(right_counts, right_sizes)) / n
        leaf = self.params.min_samples_leaf
        valid = (left_sizes >= leaf) & (right_sizes >= leaf)
        return impurity - child, valid

    def _best_split(self, idx: np.ndarray, counts: np.ndarray, impurity: float) -> Optional[_Split]:
        best: Optional[_Split] = None
        for f, (column, kind) in enumerate(zip(self.columns, self.kinds)):
            values = column[idx]
            candidate = (
                self._categorical_split(f, values, idx, counts, impurity)
                if kind is ColumnKind.CATEGORICAL
                else self._numeric_split(f, values, idx, counts, impurity)
            )
            if candidate is None:
                continue
            if best is None or candidate.improvement > best.improvement + TIE_EPS:
                best = candidate
        return best

    def _numeric_split(self, f, values, idx, counts, impurity) -> Optional[_Split]:
        order = np.argsort(values, kind="stable")
        xs = values[order]
        boundaries = np.nonzero(xs[:-1] < xs[1:])[0]
        if boundaries.size == 0:
            return None
        cumulative = np.cumsum(self.onehot[idx][order], axis=0)
        gains, valid = self._score(cumulative[boundaries], counts, impurity)
        if not valid.any():
            return None
        gains = np.where(valid, gains, -np.inf)
        # First (lowest threshold) candidate within TIE_EPS of the best gain
        pick = int(np.nonzero(gains >= gains.max() - TIE_EPS)[0][0])
        b = boundaries[pick]
        lo, hi = float(xs[b]), float(xs[b + 1])
        threshold = (lo + hi) / 2.0
        if threshold >= hi:
            threshold = lo
        return _Split(f, float(gains[pick]), values <= threshold, threshold=threshold)

    def _categorical_split(self, f, values, idx, counts, impurity) -> Optional[_Split]:
        categories = sorted(set(values.tolist()))
        if len(categories) < 2:
            return None
        onehot = self.onehot[idx]
        left_counts = np.stack([onehot[values == c].sum(axis=0) for c in categories])
        gains, valid = self._score(left_counts, counts, impurity)
        if not valid.any():
            return None
        gains = np.where(valid, gains, -np.inf)
        pick = int(np.nonzero(gains >= gains.max() - TIE_EPS)[0][0])
        category = categories[pick]
        return _Split(f, float(gains[pick]), values == category, category=category)


def fit_tree(ds: Dataset, params: Optional[TreeParams] = None) -> DecisionTree:
    """
    Greedy CART induction on Gini impurity decrease.

    Numeric thresholds are midpoints of consecutive distinct values,
    categorical features split one-vs-rest. Ties go to the lowest feature
    index, then the lowest threshold (sorted category). Zero-gain splits are
    taken while the node is impure, matching sklearn.

    Args:
        ds: Training data
        params: Tree hyperparameters; defaults to an unbounded tree

    Returns:
        Fitted DecisionTree
    """
    params = params or TreeParams()
    builder = _Builder(ds, params)
    root = builder.build(np.arange(ds.n_samples), depth=0)
    tree = DecisionTree(root, ds.feature_names, ds.column_kinds, ds.class_labels, params)
    logger.debug(f"Fitted {tree!r} on {ds.n_samples} samples")
    return tree


# Persistence

def _node_to_dict(node: TreeNode) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "counts": [int(c) for c in node.class_counts],
        "impurity": node.impurity,
        "depth": node.depth,
    }
    if not node.is_leaf:
        data.update({
            "feature": node.feature,
            "threshold": node.threshold,
            "category": node.category,
            "improvement": node.improvement,
            "left": _node_to_dict(node.left),
            "right": _node_to_dict(node.right),
        })
    return data


def _node_from_dict(data: Dict[str, Any]) -> TreeNode:
    node = TreeNode(
        class_counts=np.asarray(data["counts"], dtype=np.int64),
        impurity=float(data["impurity"]),
        depth=int(data["depth"]),
    )
    if "left" in data:
        node.feature = data["feature"]
        node.threshold = data.get("threshold")
        node.category = data.get("category")
        node.improvement = float(data.get("improvement", 0.0))
        node.left = _node_from_dict(data["left"])
        node.right = _node_from_dict(data["right"])
    return node


def tree_to_json(tree: DecisionTree) -> str:
    payload = {
        "feature_names": list(tree.feature_names),
        "column_kinds": [k.value for k in tree.column_kinds],
        "class_labels": list(tree.class_labels),
        "params": tree.params.model_dump(),
        "root": _node_to_dict(tree.root),
    }
    return json.dumps(payload, indent=2) + "\n"


def tree_from_json(text: str) -> DecisionTree:
    payload = json.loads(text)
    try:
        return DecisionTree(
            root=_node_from_dict(payload["root"]),
            feature_names=tuple(payload["feature_names"]),
            column_kinds=tuple(payload["column_kinds"]),
            class_labels=tuple(payload["class_labels"]),
            params=TreeParams.model_validate(payload.get("params", {})),
        )
    except KeyError as e:
        raise ValueError(f"tree JSON lacks field {e}") from None


def save_tree(tree: DecisionTree, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(tree_to_json(tree), encoding="utf-8")
    return path


def load_tree(path: Union[str, Path]) -> DecisionTree:
    return tree_from_json(Path(path).read_text(encoding="utf-8"))
