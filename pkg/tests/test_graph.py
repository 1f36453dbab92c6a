"""Tests for projection, normalization, feature graphs and their exports."""

import json
import math

import networkx as nx
import numpy as np
import pytest

from src.graph import (
    FeatureGraph,
    GraphMismatchError,
    average_graphs,
    build_class_graphs,
    build_graph,
    distance_matrix,
    export_graph,
    feature_importance,
    graph_distance,
    graph_to_csv,
    graph_to_dot,
    graph_to_graphml,
    graph_to_json,
    normalize,
    project,
    read_graph_csv,
    weight_split,
)
from src.dataset import DatasetError
from src.rules import parse_rules


def _graph(matrix, names=("a", "b"), **kwargs):
    adjacency, is_zero = normalize(np.asarray(matrix, dtype=np.float64))
    return FeatureGraph(adjacency=adjacency, feature_names=names, is_zero=is_zero, **kwargs)


def _raw_graph(matrix, names):
    """Graph holding ``matrix`` as is, for distance checks."""
    return FeatureGraph(adjacency=np.asarray(matrix, dtype=np.float64), feature_names=names)


class TestProject:
    """Test the weighted projection of (P, q)."""

    def test_single_rule_all_ones(self):
        np.testing.assert_array_equal(project(np.array([[1.0, 1.0]]), np.array([1.0])), [[1.0, 1.0], [1.0, 1.0]])

    def test_single_rule_product(self):
        """One rule: a_ij = p_i * p_j * q."""
        A = project(np.array([[0.5, 1.0]]), np.array([0.8]))
        np.testing.assert_allclose(A, [[0.2, 0.4], [0.4, 0.8]], atol=1e-15, rtol=0)

    def test_disjoint_rules(self):
        A = project(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]))
        np.testing.assert_array_equal(A, [[1.0, 0.0], [0.0, 1.0]])

    def test_no_rules(self):
        np.testing.assert_array_equal(project(np.zeros((0, 3)), np.zeros(0)), np.zeros((3, 3)))

    def test_bad_inputs(self):
        with pytest.raises(ValueError, match="one entry per rule"):
            project(np.ones((2, 2)), np.ones(3))
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            project(np.array([[1.5, 0.0]]), np.array([1.0]))
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            project(np.array([[0.5, 0.0]]), np.array([-0.1]))

    def test_properties(self):
        """Symmetric, in [0, 1], monotone, sums to 100 after normalization."""
        rng = np.random.default_rng(3)
        for _ in range(500):
            n = int(rng.integers(1, 9))
            m = int(rng.integers(1, 7))
            P = rng.random((n, m))
            q = rng.random(n)
            A = project(P, q)

            assert np.array_equal(A, A.T)
            assert A.min() >= 0.0 and A.max() <= 1.0

            if n == 1:
                np.testing.assert_allclose(A, np.outer(P[0], P[0]) * q[0], atol=1e-15, rtol=0)

            bumped_P = P.copy()
            k, i = int(rng.integers(n)), int(rng.integers(m))
            bumped_P[k, i] = min(1.0, bumped_P[k, i] + rng.random() * 0.5)
            assert np.all(project(bumped_P, q) >= A - 1e-15)
            bumped_q = q.copy()
            bumped_q[k] = min(1.0, bumped_q[k] + rng.random() * 0.5)
            assert np.all(project(P, bumped_q) >= A - 1e-15)

            normalized, is_zero = normalize(A)
            if not is_zero:
                assert abs(normalized.sum() - 100.0) <= 1e-9
                g = FeatureGraph(adjacency=normalized, feature_names=[f"v{j}" for j in range(m)])
                assert abs(feature_importance(g).scores.sum() - 100.0) <= 1e-9

    def test_log_space_matches_direct(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            P = rng.random((20, 4))
            q = rng.random(20)
            direct = project(P, q, log_space_threshold=1000)
            logged = project(P, q, log_space_threshold=0)
            np.testing.assert_allclose(logged, direct, atol=1e-12, rtol=0)

    def test_two_feature_rule_favors_diagonal(self):
        """p1^2 + p2^2 >= 2 p1 p2: a rule on two features cannot outweigh its self-edges."""
        rng = np.random.default_rng(8)
        for _ in range(200):
            p = np.zeros(5)
            p[rng.choice(5, size=2, replace=False)] = rng.random(2)
            A = project(p[None, :], rng.random(1))
            diagonal = float(np.trace(A))
            assert A.sum() - diagonal <= diagonal + 1e-12

    @pytest.mark.parametrize("k", [3, 4, 6])
    def test_shared_rule_favors_edges(self, k):
        """k equal relevances give off-diagonal weight k - 1 times the diagonal."""
        p = np.zeros(6)
        p[:k] = 0.7
        A = project(p[None, :], np.array([0.4]))
        diagonal = float(np.trace(A))
        assert A.sum() - diagonal == pytest.approx((k - 1) * diagonal)

    def test_log_space_saturates(self):
        """Certain edges (p = q = 1) stay exactly 1 in log space."""
        P = np.tile([1.0, 0.0], (1200, 1))
        A = project(P, np.ones(1200))
        assert A[0, 0] == 1.0
        assert A[1, 1] == 0.0


class TestNormalize:
    """Test scaling to total weight 100."""

    def test_uniform(self):
        A, is_zero = normalize(np.ones((2, 2)))
        np.testing.assert_array_equal(A, [[25.0, 25.0], [25.0, 25.0]])
        assert not is_zero

    def test_scale_factor(self):
        A, _ = normalize(np.array([[0.2, 0.4], [0.4, 0.8]]))
        np.testing.assert_allclose(A, [[100 / 9, 200 / 9], [200 / 9, 400 / 9]], rtol=1e-12)

    def test_zero(self):
        A, is_zero = normalize(np.zeros((3, 3)))
        assert is_zero
        assert A.sum() == 0.0

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            normalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestBuildGraph:
    """Test global and class-specific graphs built from rule sets."""

    def test_global_graph(self, toy_ds):
        g = build_graph(toy_ds, parse_rules("f <= 0.6 AND g > 0 => 1\nf > 0.6 => 0"))
        assert g.feature_names == ("f", "g")
        assert abs(g.adjacency.sum() - 100.0) <= 1e-9
        assert g.weight("f", "f") == 100.0
        assert g.n_rules == 2
        assert not g.is_zero

    def test_single_class_rule_set(self, toy_ds):
        """When every rule predicts t, the class-t graph equals the global one."""
        rs = parse_rules("f <= 0.6 => 1\nf <= 0.75 AND g > 0 => 1")
        np.testing.assert_array_equal(build_graph(toy_ds, rs, "1").adjacency, build_graph(toy_ds, rs).adjacency)

    def test_class_without_rules(self, toy_ds):
        g = build_graph(toy_ds, parse_rules("f <= 0.6 => 1"), class_filter="0")
        assert g.is_zero
        assert g.n_rules == 0
        assert g.adjacency.sum() == 0.0
        assert feature_importance(g).is_zero

    def test_unknown_class(self, toy_ds):
        with pytest.raises(DatasetError, match="Valid labels"):
            build_graph(toy_ds, parse_rules("f <= 0.6 => 1"), class_filter="5")

    def test_class_graphs(self, toy_ds):
        graphs = build_class_graphs(toy_ds, parse_rules("f <= 0.6 => 1\nf > 0.6 => 0"))
        assert list(graphs) == ["1", "0"]
        assert graphs["0"].class_filter == "0"

    def test_metric_tags(self, toy_ds):
        g = build_graph(toy_ds, parse_rules("f <= 0.6 => 1"), feature_metric="impurity-gain", rule_metric="support")
        assert g.metric_tags == ("impurity-gain", "support")


class TestDistance:
    """Test the Frobenius distance between graphs."""

    def test_identity(self):
        g = _graph([[1, 1], [1, 1]])
        assert graph_distance(g, g) == 0.0

    def test_diagonal_cell(self):
        g1 = _raw_graph([[3.0, 0.0], [0.0, 0.0]], ("a", "b"))
        g2 = _raw_graph([[0.0, 0.0], [0.0, 0.0]], ("a", "b"))
        assert graph_distance(g1, g2) == 3.0

    def test_off_diagonal_pair(self):
        g1 = _raw_graph([[0.0, 3.0], [3.0, 0.0]], ("a", "b"))
        g2 = _raw_graph(np.zeros((2, 2)), ("a", "b"))
        assert graph_distance(g1, g2) == pytest.approx(math.sqrt(18), abs=1e-12)

    def test_alignment_by_name(self):
        g1 = _raw_graph([[1.0, 2.0], [2.0, 5.0]], ("a", "b"))
        g2 = _raw_graph([[5.0, 2.0], [2.0, 1.0]], ("b", "a"))
        assert graph_distance(g1, g2) == 0.0

    def test_mismatched_features(self):
        g1 = _raw_graph(np.eye(2), ("a", "b"))
        g2 = _raw_graph(np.eye(2), ("a", "c"))
        with pytest.raises(GraphMismatchError, match="missing"):
            graph_distance(g1, g2)

    def test_mismatched_metrics(self):
        g1 = FeatureGraph(adjacency=np.eye(2), feature_names=("a", "b"))
        g2 = FeatureGraph(adjacency=np.eye(2), feature_names=("a", "b"), metric_tags=("impurity-gain", "lift"))
        with pytest.raises(GraphMismatchError, match="metric tags"):
            graph_distance(g1, g2)

    def test_metric_axioms(self):
        rng = np.random.default_rng(17)
        names = ("a", "b", "c", "d")
        for _ in range(300):
            graphs = []
            for _ in range(3):
                raw = rng.random((4, 4))
                graphs.append(_graph(raw + raw.T, names))
            x, y, z = graphs
            dxy, dyz, dxz = graph_distance(x, y), graph_distance(y, z), graph_distance(x, z)
            assert dxy >= 0.0
            assert graph_distance(x, x) == 0.0
            assert dxy == graph_distance(y, x)
            assert dxz <= dxy + dyz + 1e-9
            assert (dxy == 0.0) == np.array_equal(x.adjacency, y.adjacency)

    def test_distance_matrix(self):
        graphs = [_graph([[1, 0], [0, 1]]), _graph([[1, 1], [1, 1]]), _graph([[0, 1], [1, 0]])]
        D = distance_matrix(graphs)
        assert D.shape == (3, 3)
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0.0)
        assert D[0, 2] == pytest.approx(100.0, abs=1e-9)


class TestImportanceAndSplit:
    """Test row-sum centrality and the diagonal/off-diagonal split."""

    def test_uniform(self):
        report = feature_importance(_graph([[1, 1], [1, 1]]))
        np.testing.assert_array_equal(report.scores, [50.0, 50.0])
        assert report.method == "graph-centrality"

    def test_diagonal_only(self):
        report = feature_importance(_graph([[60, 0], [0, 40]]))
        np.testing.assert_allclose(report.scores, [60.0, 40.0], rtol=1e-12)
        assert report.ranking == ("a", "b")

    def test_zero_graph(self):
        report = feature_importance(_graph(np.zeros((2, 2))))
        assert report.scores.tolist() == [0.0, 0.0]
        assert report.is_zero

    def test_weight_split(self):
        g = _graph([[30, 10, 0], [10, 20, 5], [0, 5, 20]], names=("a", "b", "c"))
        diagonal, edges = weight_split(g, ["a", "b"])
        assert diagonal == pytest.approx(50.0)
        assert edges == pytest.approx(25.0)
        assert weight_split(g, []) == (0.0, 0.0)

    def test_average(self):
        avg = average_graphs([_graph([[1, 0], [0, 1]]), _graph([[1, 1], [1, 1]], names=("b", "a"))])
        assert abs(avg.adjacency.sum() - 100.0) <= 1e-9
        assert avg.source == "average"
        assert avg.metadata["n_graphs"] == 2
        np.testing.assert_allclose(avg.adjacency, [[75 / 2, 25 / 2], [25 / 2, 75 / 2]])


class TestExport:
    """Test graph serialization."""

    @pytest.fixture
    def graph(self, toy_ds):
        return build_graph(toy_ds, parse_rules("f <= 0.6 AND g > 0 => 1\nf > 0.6 AND g > 0 => 0"))

    def test_dot_edges(self):
        """Two nodes: one undirected edge plus two self-loops unless omitted."""
        g = _graph([[1, 1], [1, 1]])
        dot = graph_to_dot(g)
        assert dot.count(" -- ") == 3
        assert graph_to_dot(g, omit_self_edges=True).count(" -- ") == 1
        assert "n0 -- n0" in dot

    def test_dot_labels_and_importance(self):
        dot = graph_to_dot(_graph([[1, 1], [1, 1]], names=("plasma glucose", "b")))
        assert '"plasma glucose"' in dot
        assert "50.0" in dot

    def test_deterministic(self, graph):
        for fmt in ("dot", "graphml", "json", "csv"):
            assert export_graph(graph, fmt) == export_graph(graph, fmt)

    def test_unknown_format(self, graph):
        with pytest.raises(ValueError, match="Unknown graph format"):
            export_graph(graph, "png")

    def test_csv_round_trip(self):
        rng = np.random.default_rng(1)
        raw = rng.random((4, 4))
        g = _graph(raw + raw.T, names=("a", "b", "c", "d"))
        names, matrix = read_graph_csv(graph_to_csv(g))
        assert names == g.feature_names
        np.testing.assert_allclose(matrix, g.adjacency, atol=1e-12, rtol=0)

    def test_csv_layout(self):
        text = graph_to_csv(_graph([[1, 1], [1, 1]]), omit_self_edges=True)
        assert text == ",a,b\na,0.0,25.0\nb,25.0,0.0\n"

    def test_read_bad_csv(self):
        with pytest.raises(ValueError, match="does not match"):
            read_graph_csv(",a,b\nb,0,1\na,1,0\n")

    def test_json(self, graph):
        payload = json.loads(graph_to_json(graph))
        assert payload["features"] == ["f", "g"]
        assert payload["zero_flag"] is False
        assert payload["metric_tags"] == ["error-increase", "covering-error"]
        assert sum(payload["importance"]) == pytest.approx(100.0, abs=1e-9)

    def test_graphml(self, graph):
        parsed = nx.parse_graphml(graph_to_graphml(graph))
        assert set(parsed.nodes) == {"f", "g"}
        assert parsed.nodes["f"]["importance"] == pytest.approx(100.0)
