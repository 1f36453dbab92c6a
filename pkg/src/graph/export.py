"""DOT, GraphML, JSON and CSV serialization of feature graphs."""

import csv
import io
import json
from typing import Callable, Dict, Tuple

import networkx as nx
import numpy as np

from .builder import feature_importance
from .model import FeatureGraph

GRAPH_FORMATS = ("dot", "graphml", "json", "csv")


def _num(value: float) -> str:
    return repr(float(value))


def to_networkx(g: FeatureGraph, omit_self_edges: bool = False, node_ids: bool = False) -> nx.Graph:
    """
    Undirected weighted graph; nodes carry ``importance`` (row sum, self-edge
    included even when self-edges are omitted), edges carry ``weight``.
    Zero-weight edges are left out.
    """
    scores = feature_importance(g).scores
    G = nx.Graph(name="feature_graph")
    keys = [f"n{i}" for i in range(g.n_features)] if node_ids else list(g.feature_names)

    for key, name, score in zip(keys, g.feature_names, scores):
        G.add_node(key, label=name, importance=float(score))

    for i in range(g.n_features):
        for j in range(i, g.n_features):
            if i == j and omit_self_edges:
                continue
            weight = float(g.adjacency[i, j])
            if weight > 0.0:
                G.add_edge(keys[i], keys[j], weight=weight)
    return G


def _dot_label(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: FeatureGraph, omit_self_edges: bool = False) -> str:
    G = to_networkx(g, omit_self_edges, node_ids=True)
    # pydot needs string attributes; penwidth scales the heaviest edge to 8
    max_weight = max((w for _, _, w in G.edges(data="weight")), default=0.0)
    for _, data in G.nodes(data=True):
        data["label"] = _dot_label(data["label"])
        data["importance"] = _num(data["importance"])
    for _, _, data in G.edges(data=True):
        width = 1.0 + 7.0 * data["weight"] / max_weight if max_weight > 0 else 1.0
        data["penwidth"] = f"{width:.3f}"
        data["weight"] = _num(data["weight"])
    return nx.nx_pydot.to_pydot(G).to_string()


def graph_to_graphml(g: FeatureGraph, omit_self_edges: bool = False) -> str:
    G = to_networkx(g, omit_self_edges)
    return "\n".join(nx.generate_graphml(G)) + "\n"


def graph_to_json(g: FeatureGraph, omit_self_edges: bool = False) -> str:
    matrix = np.array(g.adjacency)
    if omit_self_edges:
        np.fill_diagonal(matrix, 0.0)
    payload = {
        "features": list(g.feature_names),
        "matrix": [[float(v) for v in row] for row in matrix],
        "class_filter": g.class_filter,
        "metric_tags": list(g.metric_tags),
        "zero_flag": g.is_zero,
        "raw_total": g.raw_total,
        "n_rules": g.n_rules,
        "importance": [float(s) for s in feature_importance(g).scores],
    }
    return json.dumps(payload, indent=2) + "\n"


def graph_to_csv(g: FeatureGraph, omit_self_edges: bool = False) -> str:
    """Labeled adjacency matrix; the header row starts with an empty cell."""
    matrix = np.array(g.adjacency)
    if omit_self_edges:
        np.fill_diagonal(matrix, 0.0)
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(["", *g.feature_names])
    for name, row in zip(g.feature_names, matrix):
        writer.writerow([name, *(_num(v) for v in row)])
    return output.getvalue()


_EXPORTERS: Dict[str, Callable[[FeatureGraph, bool], str]] = {
    "dot": graph_to_dot,
    "graphml": graph_to_graphml,
    "json": graph_to_json,
    "csv": graph_to_csv,
}


def export_graph(g: FeatureGraph, fmt: str, omit_self_edges: bool = False) -> str:
    """
    Serialize a graph deterministically.

    Raises:
        ValueError: Unknown format
    """
    exporter = _EXPORTERS.get(fmt)
    if exporter is None:
        raise ValueError(f"Unknown graph format: {fmt}. Valid: {list(GRAPH_FORMATS)}")
    return exporter(g, omit_self_edges)


def read_graph_csv(text: str) -> Tuple[Tuple[str, ...], np.ndarray]:
    """
    Parse a labeled adjacency CSV written by graph_to_csv.

    Raises:
        ValueError: Header and row labels disagree or the matrix is not square
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise ValueError("graph CSV is empty")
    names = tuple(rows[0][1:])
    body = rows[1:]
    if len(body) != len(names):
        raise ValueError(f"graph CSV has {len(names)} columns but {len(body)} rows")
    matrix = np.zeros((len(names), len(names)), dtype=np.float64)
    for i, row in enumerate(body):
        if row[0] != names[i]:
            raise ValueError(f"row {i + 1} label '{row[0]}' does not match column '{names[i]}'")
        if len(row) != len(names) + 1:
            raise ValueError(f"row '{row[0]}' has {len(row) - 1} values, expected {len(names)}")
        matrix[i] = [float(v) for v in row[1:]]
    return names, matrix
