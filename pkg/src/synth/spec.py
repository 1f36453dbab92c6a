"""Synthetic dataset specifications."""

from typing import List, Literal, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

INDEPENDENT = "independent"
COMBINED = "combined"
MIXED = "mixed"

Mode = Literal["independent", "combined"]


class RelevantFeature(BaseModel):
    """A label-bearing feature: interval membership (independent) or majority vote (combined)."""
    index: int = Field(ge=0)
    mode: Mode = INDEPENDENT
    intervals: List[Tuple[float, float]] = Field(default_factory=list)

    @field_validator("intervals")
    @classmethod
    def validate_intervals(cls, v: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for position, (lo, hi) in enumerate(v):
            if hi < lo:
                raise ValueError(f"interval {position} has hi < lo: [{lo}, {hi}]")
            if lo < 0.0 or hi > 1.0:
                raise ValueError(f"interval {position} [{lo}, {hi}] leaves [0, 1]")
        ordered = sorted(v)
        for (lo1, hi1), (lo2, hi2) in zip(ordered, ordered[1:]):
            if lo2 < hi1:
                raise ValueError(f"intervals [{lo1}, {hi1}] and [{lo2}, {hi2}] overlap")
        return v

    @model_validator(mode="after")
    def check_mode(self) -> "RelevantFeature":
        if self.mode == COMBINED and self.intervals:
            raise ValueError("combined-mode features take no intervals")
        return self


class SynthSpec(BaseModel):
    """One synthetic dataset: uniform [0, 1] features, labels from the relevant ones."""
    name: str = "synthetic"
    n_samples: int = Field(default=2000, ge=1)
    n_features: int = Field(default=8, ge=1)
    relevant: List[RelevantFeature] = Field(default_factory=list)
    threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_relevant(self) -> "SynthSpec":
        indices = [f.index for f in self.relevant]
        if len(set(indices)) != len(indices):
            raise ValueError(f"relevant feature indices must be distinct, got {indices}")
        out_of_range = [i for i in indices if i >= self.n_features]
        if out_of_range:
            raise ValueError(f"relevant indices {out_of_range} exceed n_features={self.n_features}")
        return self

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n_features))

    @property
    def independent(self) -> List[RelevantFeature]:
        return [f for f in self.relevant if f.mode == INDEPENDENT]

    @property
    def combined(self) -> List[RelevantFeature]:
        return [f for f in self.relevant if f.mode == COMBINED]

    @property
    def mode(self) -> str:
        if self.independent and self.combined:
            return MIXED
        return COMBINED if self.combined else INDEPENDENT

    @property
    def relevant_names(self) -> Tuple[str, ...]:
        return tuple(self.feature_names[f.index] for f in self.relevant)
