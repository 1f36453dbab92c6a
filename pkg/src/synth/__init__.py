"""Synthetic benchmark datasets with independent, combined and mixed relevant features."""

from .spec import COMBINED, INDEPENDENT, MIXED, RelevantFeature, SynthSpec
from .generators import gen_combined, gen_independent, gen_mixed, generate, label_samples, sample_features
from .calibration import (
    calibrate_interval_length,
    calibrate_threshold,
    combined_spec,
    independent_spec,
    interval_layout,
    majority_rate,
    mixed_spec,
    preset_suite,
)
from .suite import MANIFEST_NAME, TARGET_COLUMN, load_manifest, write_suite

__all__ = [
    "COMBINED",
    "INDEPENDENT",
    "MIXED",
    "RelevantFeature",
    "SynthSpec",
    "gen_combined",
    "gen_independent",
    "gen_mixed",
    "generate",
    "label_samples",
    "sample_features",
    "calibrate_interval_length",
    "calibrate_threshold",
    "combined_spec",
    "independent_spec",
    "interval_layout",
    "majority_rate",
    "mixed_spec",
    "preset_suite",
    "MANIFEST_NAME",
    "TARGET_COLUMN",
    "load_manifest",
    "write_suite",
]
