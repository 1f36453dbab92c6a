"""Immutable tabular dataset and sample index sets."""

import bisect
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed datasets and invalid dataset queries."""


class ColumnKind(str, Enum):
    """Kind of a feature column."""
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class SampleIndexSet:
    """Sorted, unique row indices into a dataset."""

    indices: Tuple[int, ...]

    def __post_init__(self):
        for prev, cur in zip(self.indices, self.indices[1:]):
            if cur <= prev:
                raise DatasetError("sample indices must be strictly increasing")
        if self.indices and self.indices[0] < 0:
            raise DatasetError("sample indices must be non-negative")

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "SampleIndexSet":
        return cls(tuple(int(i) for i in np.flatnonzero(mask)))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, item: object) -> bool:
        if not isinstance(item, (int, np.integer)):
            return False
        pos = bisect.bisect_left(self.indices, int(item))
        return pos < len(self.indices) and self.indices[pos] == item

    def union(self, other: "SampleIndexSet") -> "SampleIndexSet":
        return SampleIndexSet(tuple(sorted(set(self.indices) | set(other.indices))))

    def intersection(self, other: "SampleIndexSet") -> "SampleIndexSet":
        return SampleIndexSet(tuple(sorted(set(self.indices) & set(other.indices))))


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class Dataset:
    """
    Immutable tabular dataset with named, typed feature columns and a
    categorical target.

    Numeric columns are float64 arrays, categorical columns are object
    arrays of stripped strings, targets are strings. Class labels keep
    first-appearance order.
    """

    __slots__ = ("_feature_names", "_column_kinds", "_columns", "_targets", "_class_labels", "_name")

    def __init__(
        self,
        feature_names: Sequence[str],
        column_kinds: Sequence[ColumnKind],
        columns: Sequence[np.ndarray],
        targets: Sequence[Any],
        name: str = "",
    ):
        feature_names = tuple(str(f) for f in feature_names)
        column_kinds = tuple(ColumnKind(k) for k in column_kinds)

        if len(feature_names) < 1:
            raise DatasetError("dataset needs at least one feature")
        if len(set(feature_names)) != len(feature_names):
            raise DatasetError(f"duplicate feature names: {list(feature_names)}")
        if len(column_kinds) != len(feature_names) or len(columns) != len(feature_names):
            raise DatasetError("feature names, kinds and columns must have the same length")

        target_array = np.asarray([str(t).strip() for t in targets], dtype=object)
        d = len(target_array)
        if d < 1:
            raise DatasetError("dataset needs at least one sample")

        typed_columns = []
        for feature, kind, column in zip(feature_names, column_kinds, columns):
            column = np.asarray(column)
            if column.shape != (d,):
                raise DatasetError(
                    f"column '{feature}' has {column.shape[0] if column.ndim else 0} values, expected {d}"
                )
            if kind is ColumnKind.NUMERIC:
                try:
                    column = column.astype(np.float64)
                except (TypeError, ValueError):
                    raise DatasetError(f"column '{feature}' declared numeric holds non-numeric values")
                if np.isnan(column).any():
                    raise DatasetError(f"column '{feature}' holds missing values")
            else:
                column = np.asarray([str(v).strip() for v in column], dtype=object)
            typed_columns.append(_readonly(column))

        labels = tuple(dict.fromkeys(target_array.tolist()))

        self._feature_names = feature_names
        self._column_kinds = column_kinds
        self._columns = tuple(typed_columns)
        self._targets = _readonly(target_array)
        self._class_labels = labels
        self._name = name

    @classmethod
    def from_records(
        cls,
        feature_names: Sequence[str],
        rows: Iterable[Sequence[Any]],
        targets: Sequence[Any],
        kinds: Optional[Sequence[ColumnKind]] = None,
        name: str = "",
    ) -> "Dataset":
        """Build a dataset from row-major values; kinds default to numeric when every value is a number."""
        rows = [list(r) for r in rows]
        m = len(feature_names)
        for i, row in enumerate(rows):
            if len(row) != m:
                raise DatasetError(f"row {i} has {len(row)} values, expected {m}")
        columns = [np.asarray([row[j] for row in rows], dtype=object) for j in range(m)]
        if kinds is None:
            kinds = [
                ColumnKind.NUMERIC
                if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in col)
                else ColumnKind.CATEGORICAL
                for col in columns
            ]
        return cls(feature_names, kinds, columns, targets, name=name)

    # Basic shape

    @property
    def name(self) -> str:
        return self._name

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return self._feature_names

    @property
    def column_kinds(self) -> Tuple[ColumnKind, ...]:
        return self._column_kinds

    @property
    def targets(self) -> np.ndarray:
        return self._targets

    @property
    def class_labels(self) -> Tuple[str, ...]:
        return self._class_labels

    @property
    def n_samples(self) -> int:
        return len(self._targets)

    @property
    def n_features(self) -> int:
        return len(self._feature_names)

    @property
    def n_classes(self) -> int:
        return len(self._class_labels)

    @property
    def rows(self) -> List[List[Any]]:
        return [self.row_values(s) for s in range(self.n_samples)]

    # Column access

    def feature_index(self, feature: str) -> int:
        try:
            return self._feature_names.index(feature)
        except ValueError:
            raise DatasetError(f"unknown feature '{feature}'") from None

    def has_feature(self, feature: str) -> bool:
        return feature in self._feature_names

    def column(self, feature: str) -> np.ndarray:
        return self._columns[self.feature_index(feature)]

    def kind(self, feature: str) -> ColumnKind:
        return self._column_kinds[self.feature_index(feature)]

    def row_values(self, s: int) -> List[Any]:
        return [_scalar(col[s]) for col in self._columns]

    def row(self, s: int) -> Dict[str, Any]:
        """Sample s as a feature-name mapping."""
        return dict(zip(self._feature_names, self.row_values(s)))

    def class_mask(self, label: str) -> np.ndarray:
        if label not in self._class_labels:
            raise DatasetError(
                f"unknown class label '{label}'. Valid labels: {list(self._class_labels)}"
            )
        return self._targets == label

    def class_counts(self) -> Dict[str, int]:
        return {label: int((self._targets == label).sum()) for label in self._class_labels}

    def majority_class(self) -> str:
        """Most frequent label; ties go to the label that appears first."""
        counts = self.class_counts()
        return max(self._class_labels, key=lambda label: (counts[label], -self._class_labels.index(label)))

    # Derived datasets

    def subset(self, indices: Iterable[int]) -> "Dataset":
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size == 0:
            raise DatasetError("cannot take an empty subset")
        return Dataset(
            self._feature_names,
            self._column_kinds,
            [col[idx] for col in self._columns],
            self._targets[idx],
            name=self._name,
        )

    def select_features(self, features: Sequence[str]) -> "Dataset":
        positions = [self.feature_index(f) for f in features]
        return Dataset(
            [self._feature_names[p] for p in positions],
            [self._column_kinds[p] for p in positions],
            [self._columns[p] for p in positions],
            self._targets,
            name=self._name,
        )

    def with_column(self, feature: str, values: np.ndarray) -> "Dataset":
        """Copy with one column replaced (used by permutation importance)."""
        position = self.feature_index(feature)
        columns = list(self._columns)
        columns[position] = values
        return Dataset(self._feature_names, self._column_kinds, columns, self._targets, name=self._name)

    def to_frame(self, target: str = "target"):
        """Render as a pandas DataFrame with the target as the last column."""
        import pandas as pd

        data = {name: col for name, col in zip(self._feature_names, self._columns)}
        data[target] = self._targets
        return pd.DataFrame(data, columns=list(self._feature_names) + [target])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self._feature_names == other._feature_names
            and self._column_kinds == other._column_kinds
            and self._class_labels == other._class_labels
            and np.array_equal(self._targets, other._targets)
            and all(np.array_equal(a, b) for a, b in zip(self._columns, other._columns))
        )

    def __hash__(self):
        return hash((self._feature_names, self.n_samples, self._class_labels))

    def __repr__(self) -> str:
        return (
            f"Dataset(name={self._name!r}, d={self.n_samples}, m={self.n_features}, "
            f"classes={list(self._class_labels)})"
        )


def _scalar(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    return value


def class_subset(ds: Dataset, t: str) -> SampleIndexSet:
    """Indices of samples whose target is t (D_i)."""
    return SampleIndexSet.from_mask(ds.class_mask(t))


def complement_subset(ds: Dataset, t: str) -> SampleIndexSet:
    """Indices of samples whose target is not t (D_i')."""
    return SampleIndexSet.from_mask(~ds.class_mask(t))


def all_indices(ds: Dataset) -> SampleIndexSet:
    return SampleIndexSet(tuple(range(ds.n_samples)))
