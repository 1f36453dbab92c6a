"""Test suite for rule-feature-graph."""
