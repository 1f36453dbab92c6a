"""CSV ingestion and emission for tabular datasets."""

import re
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

from ..logger import get_logger
from .models import ColumnKind, Dataset, DatasetError

logger = get_logger(__name__)

# Decimal point only, optional exponent; no locale separators, no inf/nan.
NUMBER_PATTERN = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER_RE = re.compile(NUMBER_PATTERN)


def is_number(text: str) -> bool:
    """Whether text parses as a number under the loader's strict grammar."""
    return _NUMBER_RE.fullmatch(text.strip()) is not None


def load_csv(
    path: Union[str, Path],
    target: str,
    kinds: Optional[Dict[str, Union[str, ColumnKind]]] = None,
    strict: bool = False,
) -> Dataset:
    """
    Load a CSV file with a mandatory header row into a Dataset.

    Every cell is read as text first. A column is numeric when all of its
    cells match the numeric grammar, categorical otherwise, unless an
    override in ``kinds`` says otherwise. Rows with empty cells are dropped
    with a warning, or rejected when ``strict`` is set.

    Args:
        path: CSV file (UTF-8, RFC-4180 quoting)
        target: Name of the target column
        kinds: Optional per-column kind overrides
        strict: Raise instead of dropping rows with missing cells

    Returns:
        The loaded Dataset

    Raises:
        DatasetError: Missing target, empty file, bad override, strict-mode missing values
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")

    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DatasetError(f"empty file: {path}") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot parse {path}: {e}") from None

    frame = frame.fillna("")
    frame.columns = [str(c).strip() for c in frame.columns]

    if target not in frame.columns:
        raise DatasetError(f"target column not found: '{target}'. Columns: {list(frame.columns)}")

    feature_names = [c for c in frame.columns if c != target]
    if not feature_names:
        raise DatasetError("dataset has no feature columns besides the target")

    kinds = {name: ColumnKind(kind) for name, kind in (kinds or {}).items()}
    unknown = sorted(set(kinds) - set(feature_names))
    if unknown:
        raise DatasetError(f"kind overrides name unknown columns: {unknown}")

    stripped = frame.apply(lambda col: col.str.strip())
    missing = (stripped == "").any(axis=1)
    n_missing = int(missing.sum())
    if n_missing:
        if strict:
            raise DatasetError(f"{n_missing} row(s) contain missing values in {path}")
        logger.warning(f"Dropped {n_missing} row(s) with missing values from {path.name}")
        stripped = stripped.loc[~missing].reset_index(drop=True)

    if stripped.empty:
        raise DatasetError(f"no complete data rows in {path}")

    column_kinds = []
    columns = []
    for name in feature_names:
        cells = stripped[name]
        numeric = bool(cells.str.fullmatch(NUMBER_PATTERN).all())
        kind = kinds.get(name, ColumnKind.NUMERIC if numeric else ColumnKind.CATEGORICAL)
        if kind is ColumnKind.NUMERIC and not numeric:
            bad = cells[~cells.str.fullmatch(NUMBER_PATTERN)].iloc[0]
            raise DatasetError(f"column '{name}' declared numeric but holds '{bad}'")
        column_kinds.append(kind)
        columns.append(cells.astype(float).to_numpy() if kind is ColumnKind.NUMERIC else cells.to_numpy(dtype=object))

    dataset = Dataset(feature_names, column_kinds, columns, stripped[target].tolist(), name=path.stem)
    logger.debug(
        f"Loaded {path.name}: d={dataset.n_samples}, m={dataset.n_features}, "
        f"classes={list(dataset.class_labels)}"
    )
    return dataset


def write_csv(ds: Dataset, path: Union[str, Path], target: str = "target") -> Path:
    """Write a dataset as CSV readable by load_csv."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if target in ds.feature_names:
        raise DatasetError(f"target column name '{target}' clashes with a feature name")
    ds.to_frame(target).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
