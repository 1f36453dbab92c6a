"""Tests for rules: DSL, evaluation and tree-to-rule conversion."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.config import TreeParams
from src.dataset import ColumnKind, Dataset
from src.learner.tree import DecisionTree, TreeNode
from src.rules import (
    Condition,
    Operator,
    Rule,
    RuleEvaluationError,
    RuleSet,
    RuleSyntaxError,
    check_schema,
    covered_set,
    format_rule,
    format_rules,
    load_rules,
    parse_rules,
    remove_feature,
    rules_from_json,
    rules_to_json,
    satisfies,
    save_rules,
    tree_to_rules,
)


def _leaf(counts):
    return TreeNode(class_counts=np.asarray(counts, dtype=np.int64), impurity=0.0, depth=0)


def _split(feature, threshold, left, right, depth=0):
    node = TreeNode(
        class_counts=left.class_counts + right.class_counts,
        impurity=0.5,
        depth=depth,
        feature=feature,
        threshold=threshold,
        left=left,
        right=right,
    )
    return node


def _tree(root, features=("f",), labels=("a", "b")):
    return DecisionTree(root, features, [ColumnKind.NUMERIC] * len(features), labels, TreeParams())


class TestParseRules:
    """Test the rule DSL parser."""

    def test_conjunction(self):
        """`G120 > 154.5 AND BMI > 29.9 => 1` has two conditions and consequent 1."""
        rs = parse_rules("G120 > 154.5 AND BMI > 29.9 => 1")
        rule = rs[0]
        assert len(rule) == 2
        assert rule.consequent == "1"
        assert rule.conditions[0] == Condition("G120", Operator.GT, value=154.5)
        assert rule.features == ("G120", "BMI")

    def test_in_set(self):
        rule = parse_rules("color in {red, blue} => A")[0]
        assert rule.conditions[0].op is Operator.IN_SET
        assert rule.conditions[0].values == ("red", "blue")
        assert rule.consequent == "A"

    def test_interval_closedness(self):
        cond = parse_rules('"skin thickness" in (10, 20.5] => 0')[0].conditions[0]
        assert cond.feature == "skin thickness"
        assert cond.op is Operator.IN_INTERVAL
        assert (cond.lo, cond.hi, cond.lo_closed, cond.hi_closed) == (10.0, 20.5, False, True)

    def test_dangling_operator(self):
        """`x1 > AND => 1` fails at the token after the operator."""
        with pytest.raises(RuleSyntaxError) as exc:
            parse_rules("x1 > AND => 1")
        assert exc.value.line == 1
        assert exc.value.column == 6
        assert "expected a value" in exc.value.message

    def test_error_reports_line(self):
        with pytest.raises(RuleSyntaxError) as exc:
            parse_rules("f <= 1 => a\n\nf <= => b\n")
        assert exc.value.line == 3

    def test_missing_arrow(self):
        with pytest.raises(RuleSyntaxError, match="missing '=>'"):
            parse_rules("f <= 1 AND g > 2")

    def test_empty_antecedent_needs_true(self):
        with pytest.raises(RuleSyntaxError, match="TRUE"):
            parse_rules("=> a")
        assert parse_rules("TRUE => a")[0].is_empty

    def test_reversed_interval(self):
        with pytest.raises(RuleSyntaxError, match="exceeds"):
            parse_rules("f in [3, 1] => a")

    def test_order_operator_needs_number(self):
        with pytest.raises(RuleSyntaxError, match="numeric threshold"):
            parse_rules("f <= red => a")

    def test_comments_and_blank_lines(self, toy_rules_path):
        rs = load_rules(toy_rules_path)
        assert len(rs) == 3
        assert rs.rule_ids == ("R1", "R2", "R3")
        assert rs.source == "toy"

    def test_empty_document(self):
        with pytest.raises(RuleSyntaxError):
            parse_rules("  \n# only a comment\n")


class TestFormatRules:
    """Test canonical formatting and the JSON mirror."""

    def test_dsl_round_trip(self, toy_rules_path):
        rs = load_rules(toy_rules_path)
        assert parse_rules(format_rules(rs), source="toy") == rs

    def test_canonical_text(self):
        rule = Rule((Condition("f", Operator.LE, value=0.6),), "1")
        assert format_rule(rule) == "f <= 0.6 => 1"
        assert format_rule(Rule((), "a")) == "TRUE => a"

    def test_quoting(self):
        rule = Rule((Condition("skin thickness", Operator.EQ, value="AND"),), "class one")
        text = format_rule(rule)
        assert text == '"skin thickness" == "AND" => "class one"'
        assert parse_rules(text)[0] == rule

    def test_json_round_trip(self, toy_rules_path):
        rs = load_rules(toy_rules_path)
        assert rules_from_json(rules_to_json(rs), source="toy") == rs

    def test_json_shape(self):
        rs = parse_rules("f in [0.1, 0.2) AND c in {x} => 1")
        payload = json.loads(rules_to_json(rs))
        assert payload[0]["consequent"] == "1"
        assert payload[0]["conditions"][0] == {
            "feature": "f", "op": "in", "lo": 0.1, "hi": 0.2, "lo_closed": True, "hi_closed": False,
        }
        assert payload[0]["conditions"][1] == {"feature": "c", "op": "in", "values": ["x"]}

    def test_json_numeric_consequent(self):
        rs = rules_from_json('[{"conditions": [], "consequent": 1}]')
        assert rs[0].consequent == "1"

    def test_json_rejects_unknown_operator(self):
        with pytest.raises(ValidationError):
            rules_from_json('[{"conditions": [{"feature": "f", "op": "~", "value": 1}], "consequent": "a"}]')

    def test_save_by_suffix(self, tmp_path, toy_rules_path):
        rs = load_rules(toy_rules_path)
        dsl = save_rules(rs, tmp_path / "out.rules")
        js = save_rules(rs, tmp_path / "out.json")
        assert dsl.read_text(encoding="utf-8").startswith("f <= 0.6 => 1\n")
        assert json.loads(js.read_text(encoding="utf-8"))[1]["consequent"] == "0"


class TestEvaluation:
    """Test rule satisfaction and covered sets."""

    def test_satisfies_single(self):
        rule = parse_rules("f <= 0.6 => 1")[0]
        assert satisfies(rule, {"f": 0.2})

    def test_satisfies_empty(self):
        assert satisfies(Rule((), "1"), {"f": 123.0})

    def test_satisfies_conjunction(self):
        rule = parse_rules("f <= 0.6 AND g > 2 => 1")[0]
        assert not satisfies(rule, {"f": 0.2, "g": 1})

    def test_satisfies_unknown_feature(self):
        with pytest.raises(RuleEvaluationError):
            satisfies(parse_rules("h > 1 => 1")[0], {"f": 0.2})

    def test_covered_set(self, toy_ds):
        """f = [0.2, 0.9, 0.5, 0.7] and `f <= 0.6 => 1` covers {0, 2}."""
        assert covered_set(parse_rules("f <= 0.6 => 1")[0], toy_ds).indices == (0, 2)
        assert covered_set(Rule((), "1"), toy_ds).indices == (0, 1, 2, 3)

    def test_unsatisfiable_interval(self, toy_ds):
        rule = Rule((Condition.interval("f", 0.3, 0.3),), "1")
        assert len(covered_set(rule, toy_ds)) == 0

    def test_categorical_conditions(self, toy_csv_ds):
        assert covered_set(parse_rules("color in {red, blue} => 1")[0], toy_csv_ds).indices == (0, 1, 2)
        assert covered_set(parse_rules("color != red => 0")[0], toy_csv_ds).indices == (1, 3)

    def test_mask_matches_per_sample(self, toy_csv_ds, toy_rules_path):
        kinds = dict(zip(toy_csv_ds.feature_names, toy_csv_ds.column_kinds))
        for rule in load_rules(toy_rules_path):
            expected = tuple(
                s for s in range(toy_csv_ds.n_samples) if satisfies(rule, toy_csv_ds.row(s), kinds)
            )
            assert covered_set(rule, toy_csv_ds).indices == expected

    def test_check_schema(self, toy_csv_ds):
        with pytest.raises(RuleEvaluationError, match=r"\['h'\]"):
            check_schema(parse_rules("h > 1 AND f < 2 => 1").rules, toy_csv_ds)
        with pytest.raises(RuleEvaluationError, match="categorical"):
            check_schema(parse_rules("color > 1 => 1").rules, toy_csv_ds)


class TestRemoveFeature:
    """Test condition removal."""

    def test_remove_one_of_two(self):
        rule = parse_rules("f <= 0.6 AND g > 0 => 1")[0]
        assert remove_feature(rule, "g") == parse_rules("f <= 0.6 => 1")[0]

    def test_remove_all(self):
        rule = parse_rules("f <= 0.6 AND f > 0.1 => 1")[0]
        reduced = remove_feature(rule, "f")
        assert reduced.is_empty
        assert reduced.consequent == "1"

    def test_remove_absent(self):
        rule = parse_rules("f <= 0.6 => 1")[0]
        assert remove_feature(rule, "g") is rule


class TestTreeToRules:
    """Test path-to-rule translation."""

    def test_single_leaf(self):
        rs = tree_to_rules(_tree(_leaf([0, 3])))
        assert len(rs) == 1
        assert rs[0].is_empty
        assert rs[0].consequent == "b"

    def test_depth_one(self):
        rs = tree_to_rules(_tree(_split("f", 0.5, _leaf([3, 0]), _leaf([0, 2]))))
        assert format_rules(rs) == "f <= 0.5 => a\nf > 0.5 => b\n"

    def test_bounds_are_merged(self):
        """f <= 0.8 then f <= 0.5 gives a single f <= 0.5."""
        inner = _split("f", 0.5, _leaf([4, 0]), _leaf([0, 1]), depth=1)
        root = _split("f", 0.8, inner, _leaf([0, 5]))
        rs = tree_to_rules(_tree(root))
        assert format_rules(rs) == "f <= 0.5 => a\nf in (0.5, 0.8] => b\nf > 0.8 => b\n"

    def test_rules_partition_the_data(self):
        ds = Dataset(
            ["f", "g"],
            ["numeric", "numeric"],
            [np.linspace(0, 1, 11), np.linspace(1, 0, 11)],
            ["a"] * 6 + ["b"] * 5,
        )
        inner = _split("g", 0.3, _leaf([1, 2]), _leaf([5, 0]), depth=1)
        root = _split("f", 0.55, inner, _leaf([0, 3]))
        rs = tree_to_rules(_tree(root, features=("f", "g")))
        seen = [s for rule in rs for s in covered_set(rule, ds)]
        assert sorted(seen) == list(range(ds.n_samples))

    def test_rule_set_helpers(self):
        rs = parse_rules("f <= 1 => a\nf > 1 AND g > 2 => b\nTRUE => a")
        assert rs.for_class("a").consequents == ("a", "a")
        summary = rs.summary()
        assert summary.n_rules == 3
        assert summary.mean_conditions == 1.0
        assert summary.occurrence_vector(["f", "g", "h"]) == [2, 1, 0]
        assert isinstance(rs, RuleSet)
