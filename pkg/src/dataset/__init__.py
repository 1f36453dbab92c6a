"""Tabular dataset module."""

from .models import (
    ColumnKind,
    Dataset,
    DatasetError,
    SampleIndexSet,
    all_indices,
    class_subset,
    complement_subset,
)
from .loader import is_number, load_csv, write_csv

__all__ = [
    "ColumnKind",
    "Dataset",
    "DatasetError",
    "SampleIndexSet",
    "all_indices",
    "class_subset",
    "complement_subset",
    "is_number",
    "load_csv",
    "write_csv",
]
