"""Interval and threshold calibration for balanced synthetic labels, and the preset suite."""

import math
from typing import List, Tuple

from scipy.optimize import brentq
from scipy.stats import binom

from .spec import COMBINED, INDEPENDENT, MIXED, RelevantFeature, SynthSpec

TARGET_RATE = 0.5
RELEVANT_COUNTS = (2, 3, 4, 5, 6)
SUITE_MODES = (INDEPENDENT, COMBINED, MIXED)
SEEDS_PER_CONFIG = 10


def calibrate_interval_length(n_features: int, target: float = TARGET_RATE) -> float:
    """Per-feature interval length L with 1 - (1 - L)^n = target."""
    if n_features < 1:
        raise ValueError(f"need at least one independent feature, got {n_features}")
    return 1.0 - (1.0 - target) ** (1.0 / n_features)


def majority_rate(n_features: int, threshold: float) -> float:
    """P(strictly more than half of n uniform features exceed threshold)."""
    return float(binom.sf(n_features // 2, n_features, 1.0 - threshold))


def calibrate_threshold(n_features: int, target: float = TARGET_RATE) -> float:
    """Threshold whose majority rate over n uniform features equals target."""
    if n_features < 1:
        raise ValueError(f"need at least one combined feature, got {n_features}")
    return float(brentq(lambda t: majority_rate(n_features, t) - target, 0.0, 1.0, xtol=1e-14))


def interval_layout(slot: int, length: float) -> List[Tuple[float, float]]:
    """
    Two disjoint pieces of total ``length``, one in each half of [0, 1],
    staggered by slot.
    """
    half = length / 2.0
    start1 = 0.05 + 0.1 * (slot % 4)
    start2 = 0.55 + 0.1 * ((slot + 1) % 4)
    return [(start1, start1 + half), (start2, start2 + half)]


def independent_spec(r: int, seed: int, n_samples: int = 2000, n_features: int = 8) -> SynthSpec:
    length = calibrate_interval_length(r)
    relevant = [RelevantFeature(index=i, intervals=interval_layout(i, length)) for i in range(r)]
    return SynthSpec(
        name=f"{INDEPENDENT}_r{r}_s{seed}",
        n_samples=n_samples,
        n_features=n_features,
        relevant=relevant,
        seed=seed,
    )


def combined_spec(r: int, seed: int, n_samples: int = 2000, n_features: int = 8) -> SynthSpec:
    relevant = [RelevantFeature(index=i, mode=COMBINED) for i in range(r)]
    return SynthSpec(
        name=f"{COMBINED}_r{r}_s{seed}",
        n_samples=n_samples,
        n_features=n_features,
        relevant=relevant,
        threshold=calibrate_threshold(r),
        seed=seed,
    )


def mixed_spec(r: int, seed: int, n_samples: int = 2000, n_features: int = 8) -> SynthSpec:
    """
    r // 2 independent and the rest combined; each part targets
    1 - sqrt(0.5) so their OR is positive half the time.
    """
    if r < 2:
        raise ValueError(f"mixed mode needs at least 2 relevant features, got {r}")
    n_ind = r // 2
    part = 1.0 - math.sqrt(1.0 - TARGET_RATE)
    length = calibrate_interval_length(n_ind, part)
    relevant = [RelevantFeature(index=i, intervals=interval_layout(i, length)) for i in range(n_ind)]
    relevant += [RelevantFeature(index=i, mode=COMBINED) for i in range(n_ind, r)]
    return SynthSpec(
        name=f"{MIXED}_r{r}_s{seed}",
        n_samples=n_samples,
        n_features=n_features,
        relevant=relevant,
        threshold=calibrate_threshold(r - n_ind, part),
        seed=seed,
    )


_BUILDERS = {INDEPENDENT: independent_spec, COMBINED: combined_spec, MIXED: mixed_spec}


def preset_suite(seed_base: int = 0, n_samples: int = 2000, n_features: int = 8) -> List[SynthSpec]:
    """
    Full grid: relevant counts 2..6 x {independent, combined, mixed} x 10
    seeds (seed_base .. seed_base + 9), 150 specs.
    """
    return [
        _BUILDERS[mode](r, seed_base + offset, n_samples, n_features)
        for r in RELEVANT_COUNTS
        for mode in SUITE_MODES
        for offset in range(SEEDS_PER_CONFIG)
    ]
