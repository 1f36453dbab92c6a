"""Rule satisfaction, covered sets and condition removal."""

from typing import Any, Iterable, List, Mapping, Optional

import numpy as np

from ..dataset import ColumnKind, Dataset, SampleIndexSet, is_number
from .model import Condition, Operator, Rule, RuleEvaluationError


def _numeric_operand(cond: Condition, operand) -> Optional[float]:
    if isinstance(operand, float):
        return operand
    if is_number(operand):
        return float(operand)
    return None


def _categorical_equal(cell: str, operand) -> bool:
    if isinstance(operand, str):
        return cell == operand
    return is_number(cell) and float(cell) == operand


def _order_holds(op: Operator, x: float, cond: Condition) -> bool:
    if op is Operator.LE:
        return x <= cond.value
    if op is Operator.LT:
        return x < cond.value
    if op is Operator.GE:
        return x >= cond.value
    if op is Operator.GT:
        return x > cond.value
    lower_ok = x >= cond.lo if cond.lo_closed else x > cond.lo
    upper_ok = x <= cond.hi if cond.hi_closed else x < cond.hi
    return lower_ok and upper_ok


def condition_holds(cond: Condition, x: Any, kind: ColumnKind) -> bool:
    """Evaluate one condition on one cell value."""
    if kind is ColumnKind.CATEGORICAL:
        if cond.op.is_order:
            raise RuleEvaluationError(
                f"order operator '{cond.op.value}' applied to categorical feature '{cond.feature}'"
            )
        cell = str(x).strip()
        if cond.op is Operator.IN_SET:
            return any(_categorical_equal(cell, v) for v in cond.values)
        equal = _categorical_equal(cell, cond.value)
        return equal if cond.op is Operator.EQ else not equal

    x = float(x)
    if cond.op.is_order:
        return bool(_order_holds(cond.op, x, cond))
    if cond.op is Operator.IN_SET:
        return any(x == _numeric_operand(cond, v) for v in cond.values)
    equal = x == _numeric_operand(cond, cond.value)
    return equal if cond.op is Operator.EQ else not equal


def _infer_kind(value: Any) -> ColumnKind:
    return ColumnKind.CATEGORICAL if isinstance(value, str) else ColumnKind.NUMERIC


def satisfies(
    rule: Rule,
    sample: Mapping[str, Any],
    kinds: Optional[Mapping[str, ColumnKind]] = None,
) -> bool:
    """
    Whether a sample satisfies every condition of the rule.

    Args:
        rule: Rule to evaluate; an empty antecedent is always satisfied
        sample: Feature name to cell value
        kinds: Column kinds; inferred from the value types when omitted

    Raises:
        RuleEvaluationError: Unknown feature or order operator on a categorical value
    """
    for cond in rule.conditions:
        if cond.feature not in sample:
            raise RuleEvaluationError(f"sample has no feature '{cond.feature}'")
        value = sample[cond.feature]
        kind = kinds[cond.feature] if kinds is not None else _infer_kind(value)
        if not condition_holds(cond, value, kind):
            return False
    return True


def condition_mask(cond: Condition, ds: Dataset) -> np.ndarray:
    """Boolean mask over the dataset rows for one condition."""
    if not ds.has_feature(cond.feature):
        raise RuleEvaluationError(f"feature '{cond.feature}' not in dataset schema")
    column = ds.column(cond.feature)

    if ds.kind(cond.feature) is ColumnKind.CATEGORICAL:
        if cond.op.is_order:
            raise RuleEvaluationError(
                f"order operator '{cond.op.value}' applied to categorical feature '{cond.feature}'"
            )
        return np.fromiter(
            (condition_holds(cond, cell, ColumnKind.CATEGORICAL) for cell in column),
            dtype=bool,
            count=len(column),
        )

    op = cond.op
    if op is Operator.LE:
        return column <= cond.value
    if op is Operator.LT:
        return column < cond.value
    if op is Operator.GE:
        return column >= cond.value
    if op is Operator.GT:
        return column > cond.value
    if op is Operator.IN_INTERVAL:
        lower = column >= cond.lo if cond.lo_closed else column > cond.lo
        upper = column <= cond.hi if cond.hi_closed else column < cond.hi
        return lower & upper
    if op is Operator.IN_SET:
        mask = np.zeros(len(column), dtype=bool)
        for v in cond.values:
            operand = _numeric_operand(cond, v)
            if operand is not None:
                mask |= column == operand
        return mask

    operand = _numeric_operand(cond, cond.value)
    equal = column == operand if operand is not None else np.zeros(len(column), dtype=bool)
    return equal if op is Operator.EQ else ~equal


def conjunction_mask(conditions: Iterable[Condition], ds: Dataset) -> np.ndarray:
    mask = np.ones(ds.n_samples, dtype=bool)
    for cond in conditions:
        mask &= condition_mask(cond, ds)
    return mask


def rule_mask(rule: Rule, ds: Dataset) -> np.ndarray:
    return conjunction_mask(rule.conditions, ds)


def covered_set(rule: Rule, ds: Dataset) -> SampleIndexSet:
    """Indices of the samples that satisfy the rule (D^k)."""
    return SampleIndexSet.from_mask(rule_mask(rule, ds))


def remove_feature(rule: Rule, feature: str) -> Rule:
    """Drop every condition on ``feature`` (R_-h); the consequent is unchanged."""
    kept = tuple(c for c in rule.conditions if c.feature != feature)
    if len(kept) == len(rule.conditions):
        return rule
    return Rule(kept, rule.consequent)


def check_schema(rules: Iterable[Rule], ds: Dataset) -> None:
    """
    Validate rules against a dataset schema before analysis.

    Raises:
        RuleEvaluationError: Listing every unknown feature and every order
            operator used on a categorical feature
    """
    missing: List[str] = []
    misused: List[str] = []
    for rule in rules:
        for cond in rule.conditions:
            if not ds.has_feature(cond.feature):
                if cond.feature not in missing:
                    missing.append(cond.feature)
            elif cond.op.is_order and ds.kind(cond.feature) is ColumnKind.CATEGORICAL:
                if cond.feature not in misused:
                    misused.append(cond.feature)
    problems = []
    if missing:
        problems.append(f"features not in dataset: {missing}")
    if misused:
        problems.append(f"order operators on categorical features: {misused}")
    if problems:
        raise RuleEvaluationError("rule/dataset schema mismatch; " + "; ".join(problems))
