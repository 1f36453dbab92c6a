"""Decision tree to rule set conversion."""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

from .model import Condition, Operator, Rule, RuleSet

if TYPE_CHECKING:
    from ..learner.tree import DecisionTree, TreeNode


@dataclass
class _PathBounds:
    """Constraints accumulated on one feature along a root-to-leaf path."""
    lower: Optional[float] = None   # exclusive, from "> t" edges
    upper: Optional[float] = None   # inclusive, from "<= t" edges
    equal: Optional[str] = None
    excluded: List[str] = field(default_factory=list)

    def tighten_upper(self, threshold: float) -> None:
        self.upper = threshold if self.upper is None else min(self.upper, threshold)

    def tighten_lower(self, threshold: float) -> None:
        self.lower = threshold if self.lower is None else max(self.lower, threshold)

    def to_conditions(self, feature: str) -> List[Condition]:
        if self.equal is not None:
            return [Condition(feature, Operator.EQ, value=self.equal)]
        if self.excluded:
            return [Condition(feature, Operator.NE, value=v) for v in self.excluded]
        if self.lower is not None and self.upper is not None:
            return [Condition.interval(feature, self.lower, self.upper, lo_closed=False, hi_closed=True)]
        if self.upper is not None:
            return [Condition(feature, Operator.LE, value=self.upper)]
        return [Condition(feature, Operator.GT, value=self.lower)]


def _leaf_rule(path: List[Tuple[str, "_PathBounds"]], consequent: str) -> Rule:
    conditions: List[Condition] = []
    for feature, bounds in path:
        conditions.extend(bounds.to_conditions(feature))
    return Rule(tuple(conditions), consequent)


def tree_to_rules(tree: "DecisionTree") -> RuleSet:
    """
    Translate every root-to-leaf path into one if-then rule.

    Same-feature bounds along a path are merged (tightest lower and upper
    bound), numeric splits emit ``<=`` on the left edge and ``>`` on the
    right edge, categorical splits ``==`` / ``!=``. Rules come out in
    left-first depth-first leaf order and partition the feature space.
    """
    rules: List[Rule] = []

    def walk(node: "TreeNode", bounds: Dict[str, _PathBounds], order: List[str]) -> None:
        if node.is_leaf:
            path = [(feature, bounds[feature]) for feature in order]
            rules.append(_leaf_rule(path, tree.class_labels[node.majority_index]))
            return

        for branch, child in (("left", node.left), ("right", node.right)):
            child_bounds = {f: _copy_bounds(b) for f, b in bounds.items()}
            child_order = list(order)
            if node.feature not in child_bounds:
                child_bounds[node.feature] = _PathBounds()
                child_order.append(node.feature)
            target = child_bounds[node.feature]

            if node.category is not None:
                if branch == "left":
                    target.equal = node.category
                    target.excluded = []
                elif target.equal is None and node.category not in target.excluded:
                    target.excluded.append(node.category)
            elif branch == "left":
                target.tighten_upper(node.threshold)
            else:
                target.tighten_lower(node.threshold)
            walk(child, child_bounds, child_order)

    walk(tree.root, {}, [])
    return RuleSet(tuple(rules), source="tree")


def _copy_bounds(bounds: _PathBounds) -> _PathBounds:
    return _PathBounds(bounds.lower, bounds.upper, bounds.equal, list(bounds.excluded))
