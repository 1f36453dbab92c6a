"""Independent, combined and mixed synthetic dataset generators."""

import numpy as np

from ..dataset import ColumnKind, Dataset
from ..logger import get_logger
from .spec import COMBINED, INDEPENDENT, MIXED, SynthSpec

logger = get_logger(__name__)

POSITIVE = "1"
NEGATIVE = "0"


def label_samples(spec: SynthSpec, X: np.ndarray) -> np.ndarray:
    """
    Binary labels (0/1 ints) for a feature matrix.

    Positive when some independent feature lies in one of its closed
    intervals, or when strictly more than half of the combined features
    exceed the threshold.
    """
    X = np.asarray(X, dtype=np.float64)
    hit = np.zeros(X.shape[0], dtype=bool)
    for feature in spec.independent:
        column = X[:, feature.index]
        for lo, hi in feature.intervals:
            hit |= (column >= lo) & (column <= hi)

    combined = spec.combined
    if combined:
        above = np.sum(X[:, [f.index for f in combined]] > spec.threshold, axis=1)
        hit |= 2 * above > len(combined)
    return hit.astype(np.int64)


def sample_features(spec: SynthSpec) -> np.ndarray:
    """Uniform [0, 1) feature matrix from a PCG64 stream seeded with ``spec.seed``."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return rng.random((spec.n_samples, spec.n_features))


def generate(spec: SynthSpec) -> Dataset:
    X = sample_features(spec)
    labels = label_samples(spec, X)
    targets = np.where(labels == 1, POSITIVE, NEGATIVE)
    logger.debug(f"Generated {spec.name}: {spec.n_samples}x{spec.n_features}, positive rate {labels.mean():.4f}")
    return Dataset(
        spec.feature_names,
        [ColumnKind.NUMERIC] * spec.n_features,
        [X[:, i] for i in range(spec.n_features)],
        targets,
        name=spec.name,
    )


def _require_mode(spec: SynthSpec, expected: str) -> None:
    if spec.relevant and spec.mode != expected:
        raise ValueError(f"spec '{spec.name}' is {spec.mode}, expected {expected}")


def gen_independent(spec: SynthSpec) -> Dataset:
    """Label 1 iff at least one relevant feature falls in one of its intervals."""
    _require_mode(spec, INDEPENDENT)
    return generate(spec)


def gen_combined(spec: SynthSpec) -> Dataset:
    """Label 1 iff strictly more than half of the relevant features exceed the threshold."""
    _require_mode(spec, COMBINED)
    return generate(spec)


def gen_mixed(spec: SynthSpec) -> Dataset:
    """OR of the independent disjunction and the combined majority."""
    _require_mode(spec, MIXED)
    return generate(spec)
