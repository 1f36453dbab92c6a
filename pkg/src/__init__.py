"""Feature graphs and feature importance for rule-based classifiers."""

__version__ = "0.1.0"
__author__ = "rule-feature-graph developers"
__description__ = "Projects rule sets onto weighted feature graphs to measure feature contributions"
