"""Conditions, rules and rule sets."""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

Operand = Union[float, str]


class RuleEvaluationError(ValueError):
    """Raised when a rule cannot be evaluated against a dataset schema."""


class Operator(str, Enum):
    """Condition operators."""
    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"
    EQ = "=="
    NE = "!="
    IN_SET = "in-set"
    IN_INTERVAL = "in-interval"

    @property
    def is_order(self) -> bool:
        return self in ORDER_OPERATORS


ORDER_OPERATORS = frozenset({Operator.LE, Operator.LT, Operator.GE, Operator.GT, Operator.IN_INTERVAL})
COMPARISON_OPERATORS = {op.value: op for op in (Operator.LE, Operator.LT, Operator.GE, Operator.GT, Operator.EQ, Operator.NE)}


def normalize_operand(value) -> Operand:
    """Numbers become floats, everything else stripped text."""
    if isinstance(value, str):
        return value.strip()
    if isinstance(value, bool):
        return str(value)
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value).strip()


@dataclass(frozen=True)
class Condition:
    """
    A single test on one feature.

    ``value`` is used by the comparison operators, ``values`` by in-set,
    ``lo``/``hi`` with their closedness flags by in-interval.
    """

    feature: str
    op: Operator
    value: Optional[Operand] = None
    values: Optional[Tuple[Operand, ...]] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "op", Operator(self.op))
        if self.value is not None:
            object.__setattr__(self, "value", normalize_operand(self.value))
        if self.values is not None:
            object.__setattr__(self, "values", tuple(normalize_operand(v) for v in self.values))
        if self.op is Operator.IN_INTERVAL:
            if self.lo is None or self.hi is None:
                raise ValueError(f"interval condition on '{self.feature}' needs both bounds")
            object.__setattr__(self, "lo", float(self.lo))
            object.__setattr__(self, "hi", float(self.hi))
            if self.lo > self.hi:
                raise ValueError(
                    f"interval condition on '{self.feature}' has lo > hi ({self.lo} > {self.hi})"
                )
        elif self.op is Operator.IN_SET:
            if not self.values:
                raise ValueError(f"set condition on '{self.feature}' needs at least one value")
            object.__setattr__(self, "values", tuple(self.values))
        else:
            if self.value is None:
                raise ValueError(f"condition '{self.feature} {self.op.value}' needs a value")
            if self.op.is_order and isinstance(self.value, str):
                raise ValueError(
                    f"order operator '{self.op.value}' on '{self.feature}' needs a numeric threshold"
                )

    @classmethod
    def interval(cls, feature: str, lo: float, hi: float,
                 lo_closed: bool = True, hi_closed: bool = True) -> "Condition":
        return cls(feature, Operator.IN_INTERVAL, lo=lo, hi=hi, lo_closed=lo_closed, hi_closed=hi_closed)

    @classmethod
    def one_of(cls, feature: str, values: Iterable[Operand]) -> "Condition":
        return cls(feature, Operator.IN_SET, values=tuple(values))


@dataclass(frozen=True)
class Rule:
    """Conjunctive antecedent implying a class label. No conditions means always satisfied."""

    conditions: Tuple[Condition, ...]
    consequent: str

    def __post_init__(self):
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "consequent", str(self.consequent))

    @property
    def features(self) -> Tuple[str, ...]:
        """Features the antecedent tests, in first-occurrence order."""
        return tuple(dict.fromkeys(c.feature for c in self.conditions))

    @property
    def is_empty(self) -> bool:
        return not self.conditions

    def __len__(self) -> int:
        return len(self.conditions)


@dataclass(frozen=True)
class RuleSet:
    """Ordered rules; position k is the row index of P and q."""

    rules: Tuple[Rule, ...]
    source: str = "parsed"

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __getitem__(self, k: int) -> Rule:
        return self.rules[k]

    @property
    def rule_ids(self) -> Tuple[str, ...]:
        return tuple(f"R{k + 1}" for k in range(len(self.rules)))

    @property
    def features(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(f for rule in self.rules for f in rule.features))

    @property
    def consequents(self) -> Tuple[str, ...]:
        return tuple(rule.consequent for rule in self.rules)

    def for_class(self, label: str) -> "RuleSet":
        """Rules whose consequent is ``label`` (R_i), order preserved."""
        return RuleSet(tuple(r for r in self.rules if r.consequent == label), source=self.source)

    def summary(self) -> "RuleSetSummary":
        n = len(self.rules)
        occurrences: Counter = Counter(f for rule in self.rules for f in rule.features)
        return RuleSetSummary(
            n_rules=n,
            mean_conditions=(sum(len(r) for r in self.rules) / n) if n else 0.0,
            rules_per_class=dict(Counter(r.consequent for r in self.rules)),
            feature_occurrences=dict(occurrences),
        )


@dataclass
class RuleSetSummary:
    """Descriptive statistics of a rule set."""
    n_rules: int
    mean_conditions: float
    rules_per_class: Dict[str, int] = field(default_factory=dict)
    feature_occurrences: Dict[str, int] = field(default_factory=dict)

    def occurrence_vector(self, feature_names: List[str]) -> List[int]:
        return [self.feature_occurrences.get(f, 0) for f in feature_names]
