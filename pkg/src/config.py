"""Configuration management for the rule feature graph toolkit."""

import itertools
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, List, Union

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator
from loguru import logger


FEATURE_METRICS = ("error-increase", "impurity-gain")
RULE_METRICS = ("covering-error", "support", "confidence", "lift")
LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


class TreeParams(BaseModel):
    """Hyperparameters of a single CART tree."""
    max_depth: Optional[int] = Field(default=None, ge=1)
    min_samples_leaf: int = Field(default=1, ge=1)
    min_impurity_decrease: float = Field(default=0.0, ge=0.0)

    def label(self) -> str:
        depth = "none" if self.max_depth is None else str(self.max_depth)
        return f"depth={depth},leaf={self.min_samples_leaf}"


class TreeGrid(BaseModel):
    """Hyperparameter grid searched by the inner cross-validation loop."""
    max_depth: List[Optional[int]] = Field(default_factory=lambda: [3, 4, 5, 6, 8, None])
    min_samples_leaf: List[int] = Field(default_factory=lambda: [1, 5, 10])
    min_impurity_decrease: float = Field(default=0.0, ge=0.0)

    @field_validator("max_depth", "min_samples_leaf")
    @classmethod
    def validate_not_empty(cls, v: list) -> list:
        """Grids need at least one value per axis."""
        if not v:
            raise ValueError("grid axis must contain at least one value")
        return v

    @field_validator("max_depth")
    @classmethod
    def validate_depths(cls, v: List[Optional[int]]) -> List[Optional[int]]:
        bad = [d for d in v if d is not None and d < 1]
        if bad:
            raise ValueError(f"max_depth values must be >= 1 or None, got {bad}")
        return v

    @field_validator("min_samples_leaf")
    @classmethod
    def validate_leaves(cls, v: List[int]) -> List[int]:
        bad = [n for n in v if n < 1]
        if bad:
            raise ValueError(f"min_samples_leaf values must be >= 1, got {bad}")
        return v

    def combinations(self) -> List[TreeParams]:
        """Enumerate grid points in declaration order (depth-major)."""
        return [
            TreeParams(
                max_depth=depth,
                min_samples_leaf=leaf,
                min_impurity_decrease=self.min_impurity_decrease,
            )
            for depth, leaf in itertools.product(self.max_depth, self.min_samples_leaf)
        ]


class ValidationConfig(BaseModel):
    """Nested cross-validation settings."""
    outer_folds: int = Field(default=5, ge=2)
    inner_folds: int = Field(default=3, ge=2)
    grid: TreeGrid = Field(default_factory=TreeGrid)


class AnalysisConfig(BaseModel):
    """Relevance, projection and importance settings."""
    feature_metric: str = Field(default="error-increase")
    rule_metric: str = Field(default="covering-error")
    log_space_threshold: int = Field(default=1000, ge=1)
    permutation_repeats: int = Field(default=10, ge=1)
    strict_missing: bool = Field(default=False)

    @field_validator("feature_metric")
    @classmethod
    def validate_feature_metric(cls, v: str) -> str:
        if v not in FEATURE_METRICS:
            raise ValueError(f"Invalid feature metric: {v}. Valid: {list(FEATURE_METRICS)}")
        return v

    @field_validator("rule_metric")
    @classmethod
    def validate_rule_metric(cls, v: str) -> str:
        if v not in RULE_METRICS:
            raise ValueError(f"Invalid rule metric: {v}. Valid: {list(RULE_METRICS)}")
        return v


@dataclass(frozen=True)
class Config:
    """Main configuration container for a toolkit run."""

    # Randomness and parallelism
    seed: int = 0
    jobs: int = 1

    # Logging Configuration
    log_directory: Optional[Union[str, Path]] = None
    log_level: str = "INFO"
    debug: bool = False
    quiet: bool = False

    validation: ValidationConfig = field(default_factory=ValidationConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    @classmethod
    def from_env(cls, env_file: Optional[Union[str, Path]] = None) -> "Config":
        """Load configuration from RULEGRAPH_* environment variables and a .env file."""

        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()

        config_data = {
            "seed": int(os.getenv("RULEGRAPH_SEED", "0")),
            "jobs": int(os.getenv("RULEGRAPH_JOBS", "1")),
            "log_directory": os.getenv("RULEGRAPH_LOG_DIRECTORY") or None,
            "log_level": os.getenv("RULEGRAPH_LOG_LEVEL", "INFO"),
            "debug": os.getenv("RULEGRAPH_DEBUG", "false").lower() == "true",
        }

        validation_data = {}
        for key in ["outer_folds", "inner_folds"]:
            if value := os.getenv(f"RULEGRAPH_{key.upper()}"):
                validation_data[key] = int(value)
        config_data["validation"] = ValidationConfig(**validation_data)

        analysis_data = {}
        if value := os.getenv("RULEGRAPH_PERMUTATION_REPEATS"):
            analysis_data["permutation_repeats"] = int(value)
        if value := os.getenv("RULEGRAPH_STRICT_MISSING"):
            analysis_data["strict_missing"] = value.lower() == "true"
        for key in ["feature_metric", "rule_metric"]:
            if value := os.getenv(f"RULEGRAPH_{key.upper()}"):
                analysis_data[key] = value
        config_data["analysis"] = AnalysisConfig(**analysis_data)

        return cls(**config_data)

    def validate(self) -> None:
        """Validate run-wide settings."""
        if self.jobs == 0 or self.jobs < -1:
            raise ValueError(f"jobs must be a positive integer or -1, got {self.jobs}")

        if self.log_directory is not None:
            log_dir = Path(self.log_directory)
            try:
                log_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise ValueError(f"Invalid log directory: {e}")

        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"Invalid log level: {self.log_level}. Valid: {list(LOG_LEVELS)}")

        if self.debug and self.quiet:
            logger.warning("Both debug and quiet requested; debug wins")

    def __post_init__(self):
        """Convert string paths and raw dicts to their typed forms."""
        if isinstance(self.log_directory, str):
            object.__setattr__(self, "log_directory", Path(self.log_directory))

        if isinstance(self.validation, dict):
            object.__setattr__(self, "validation", ValidationConfig(**self.validation))

        if isinstance(self.analysis, dict):
            object.__setattr__(self, "analysis", AnalysisConfig(**self.analysis))
