"""Rule representation, DSL parsing and evaluation."""

from .model import (
    Condition,
    Operator,
    Rule,
    RuleEvaluationError,
    RuleSet,
    RuleSetSummary,
)
from .evaluate import (
    check_schema,
    condition_holds,
    condition_mask,
    covered_set,
    remove_feature,
    rule_mask,
    satisfies,
)
from .parser import (
    RuleSyntaxError,
    format_rule,
    format_rules,
    load_rules,
    parse_rules,
    rules_from_json,
    rules_to_json,
    save_rules,
)
from .extraction import tree_to_rules

__all__ = [
    "Condition",
    "Operator",
    "Rule",
    "RuleEvaluationError",
    "RuleSet",
    "RuleSetSummary",
    "check_schema",
    "condition_holds",
    "condition_mask",
    "covered_set",
    "remove_feature",
    "rule_mask",
    "satisfies",
    "RuleSyntaxError",
    "format_rule",
    "format_rules",
    "load_rules",
    "parse_rules",
    "rules_from_json",
    "rules_to_json",
    "save_rules",
    "tree_to_rules",
]
