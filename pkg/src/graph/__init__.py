"""Feature graph projection, comparison, importance and export."""

from .model import FeatureGraph, GraphMismatchError
from .projection import TOTAL_WEIGHT, normalize, project
from .builder import (
    CENTRALITY_METHOD,
    average_graphs,
    build_class_graphs,
    build_graph,
    distance_matrix,
    feature_importance,
    graph_distance,
    graph_from_relevance,
    weight_split,
)
from .export import (
    GRAPH_FORMATS,
    export_graph,
    graph_to_csv,
    graph_to_dot,
    graph_to_graphml,
    graph_to_json,
    read_graph_csv,
    to_networkx,
)

__all__ = [
    "FeatureGraph",
    "GraphMismatchError",
    "TOTAL_WEIGHT",
    "normalize",
    "project",
    "CENTRALITY_METHOD",
    "average_graphs",
    "build_class_graphs",
    "build_graph",
    "distance_matrix",
    "feature_importance",
    "graph_distance",
    "graph_from_relevance",
    "weight_split",
    "GRAPH_FORMATS",
    "export_graph",
    "graph_to_csv",
    "graph_to_dot",
    "graph_to_graphml",
    "graph_to_json",
    "read_graph_csv",
    "to_networkx",
]
