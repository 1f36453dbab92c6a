"""Projection of (P, q) onto a feature adjacency matrix and its normalization."""

from typing import Tuple

import numpy as np

from ..logger import get_logger

logger = get_logger(__name__)

TOTAL_WEIGHT = 100.0
LOG_SPACE_THRESHOLD = 1000


def _check_unit_range(name: str, values: np.ndarray) -> None:
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValueError(f"{name} entries must lie in [0, 1], got range [{values.min()}, {values.max()}]")


def project(P: np.ndarray, q: np.ndarray, log_space_threshold: int = LOG_SPACE_THRESHOLD) -> np.ndarray:
    """
    Weighted projection of the rule/feature bipartite graph:
    a_ij = 1 - prod_k (1 - p_ki * p_kj * q_k), self-edges included.

    Args:
        P: n x m feature relevance matrix, entries in [0, 1]
        q: Length-n rule relevance vector, entries in [0, 1]
        log_space_threshold: Above this many rules the product is accumulated
            as a sum of log1p terms

    Returns:
        Symmetric m x m matrix with entries in [0, 1]

    Raises:
        ValueError: Dimension mismatch or entries outside [0, 1]
    """
    P = np.asarray(P, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if P.ndim != 2:
        raise ValueError(f"P must be a 2-d matrix, got shape {P.shape}")
    if q.ndim != 1 or q.shape[0] != P.shape[0]:
        raise ValueError(f"q must have one entry per rule: P has {P.shape[0]} rows, q has shape {q.shape}")
    _check_unit_range("P", P)
    _check_unit_range("q", q)

    n, m = P.shape
    if n > log_space_threshold:
        logger.debug(f"Projecting {n} rules in log space")
        log_keep = np.zeros((m, m), dtype=np.float64)
        with np.errstate(divide="ignore"):
            for p_row, q_k in zip(P, q):
                log_keep += np.log1p(-(np.outer(p_row, p_row) * q_k))
        A = -np.expm1(log_keep)
    else:
        keep = np.ones((m, m), dtype=np.float64)
        for p_row, q_k in zip(P, q):
            keep *= 1.0 - np.outer(p_row, p_row) * q_k
        A = 1.0 - keep

    # Upper triangle mirrored so symmetry is exact
    upper = np.triu(A)
    return upper + np.triu(upper, 1).T


def normalize(A: np.ndarray) -> Tuple[np.ndarray, bool]:
    """
    Scale A so its entries sum to 100.

    Returns:
        (normalized matrix, is_zero); an all-zero input yields the zero
        matrix with is_zero set.

    Raises:
        ValueError: A is not square, symmetric and non-negative
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    if A.size and A.min() < 0.0:
        raise ValueError("adjacency entries must be non-negative")
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency must be symmetric")

    total = float(A.sum())
    if total <= 0.0:
        return np.zeros_like(A), True
    return A * (TOTAL_WEIGHT / total), False
