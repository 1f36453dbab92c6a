import csv
import io
import json
from typing import Any, Dict, List, Sequence

import numpy as np

from .summarizer import ImportanceReport, StabilityTable, TopKResult, TrainingSummary


def _num(value: float) -> str:
    return repr(float(value))


def _csv(rows: List[List[Any]]) -> str:
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerows(rows)
    return output.getvalue()


def _json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _table(header: Sequence[str], rows: List[Sequence[str]]) -> str:
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
    lines = ["  ".join(str(cell).ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header, *rows]]
    return "\n".join(lines) + "\n"


# Importance

def format_importance_text(report: ImportanceReport, top_k: int = 0) -> str:
    """
    Ranked importance table, most important first.
    Columns: rank, feature, score
    """
    order = report.order[:top_k] if top_k > 0 else report.order
    rows = [[str(pos), report.feature_names[i], f"{report.scores[i]:.4f}"] for pos, i in enumerate(order, 1)]
    title = f"Feature importance ({report.method})"
    if report.is_zero:
        title += " - zero graph, ranking is uninformative"
    return title + "\n" + _table(["rank", "feature", "score"], rows)


def format_importance_csv(report: ImportanceReport) -> str:
    """
    CSV in declaration order.
    Columns: feature, score, rank
    """
    rows: List[List[Any]] = [["feature", "score", "rank"]]
    for name, score, rank in zip(report.feature_names, report.scores, report.ranks):
        rows.append([name, _num(score), int(rank)])
    return _csv(rows)


def format_importance_json(report: ImportanceReport) -> str:
    return _json({
        "method": report.method,
        "features": list(report.feature_names),
        "scores": [float(s) for s in report.scores],
        "ranks": [int(r) for r in report.ranks],
        "ranking": list(report.ranking),
        "zero": report.is_zero,
        "metadata": report.metadata,
    })


# Distances

def format_distance_text(labels: Sequence[str], matrix: np.ndarray) -> str:
    rows = [[label, *(f"{v:.4f}" for v in row)] for label, row in zip(labels, matrix)]
    return "Frobenius distance\n" + _table(["", *labels], rows)


def format_distance_csv(labels: Sequence[str], matrix: np.ndarray) -> str:
    rows: List[List[Any]] = [["", *labels]]
    rows.extend([label, *(_num(v) for v in row)] for label, row in zip(labels, matrix))
    return _csv(rows)


def format_distance_json(labels: Sequence[str], matrix: np.ndarray) -> str:
    return _json({"labels": list(labels), "distances": [[float(v) for v in row] for row in matrix]})


# Stability

def format_stability_text(table: StabilityTable) -> str:
    rows = [[method, f"{rho:.4f}"] for method, rho in table.mean_rho.items()]
    title = f"Mean pairwise Spearman rho over {table.n_models} models ({', '.join(table.model_labels)})"
    return title + "\n" + _table(["method", "mean_rho"], rows)


def format_stability_csv(table: StabilityTable) -> str:
    rows: List[List[Any]] = [["method", "mean_rho", "n_models"]]
    rows.extend([method, _num(rho), table.n_models] for method, rho in table.mean_rho.items())
    return _csv(rows)


def format_stability_json(table: StabilityTable) -> str:
    return _json({
        "models": list(table.model_labels),
        "mean_rho": {method: float(rho) for method, rho in table.mean_rho.items()},
        "rankings": {method: [list(r) for r in ranks] for method, ranks in table.rankings.items()},
    })


# Training

def format_training_text(summary: TrainingSummary) -> str:
    rows = [
        [str(f.fold), f.params, f"{f.accuracy:.4f}", f"{f.macro_f1:.4f}", str(f.n_rules)]
        for f in summary.folds
    ]
    header = (
        f"Nested cross-validation on {summary.dataset} "
        f"({summary.outer_folds} folds, seed {summary.seed})\n"
    )
    footer = f"mean accuracy {summary.mean_accuracy:.4f}, mean macro F1 {summary.mean_f1:.4f}\n"
    return header + _table(["fold", "params", "accuracy", "macro_f1", "rules"], rows) + footer


def format_training_json(summary: TrainingSummary) -> str:
    return _json({
        "dataset": summary.dataset,
        "seed": summary.seed,
        "outer_folds": summary.outer_folds,
        "mean_accuracy": summary.mean_accuracy,
        "mean_macro_f1": summary.mean_f1,
        "folds": [
            {
                "fold": f.fold,
                "params": f.params,
                "accuracy": f.accuracy,
                "macro_f1": f.macro_f1,
                "n_rules": f.n_rules,
                "n_train": f.n_train,
                "n_test": f.n_test,
                "rules_file": f.rules_file,
            }
            for f in summary.folds
        ],
        "metadata": summary.metadata,
    })


# Top-k

def format_topk_text(result: TopKResult) -> str:
    lines = [f"Top-{result.k} features by {result.method}: {', '.join(result.features)}"]
    if result.clamped:
        lines.append(f"(k clamped from {result.requested_k})")
    accuracies = ", ".join(f"{a:.4f}" for a in result.fold_accuracies)
    lines.append(f"retrained accuracy {result.mean_accuracy:.4f} [{accuracies}]")
    return "\n".join(lines) + "\n"


def format_topk_json(result: TopKResult) -> str:
    return _json({
        "method": result.method,
        "k": result.k,
        "requested_k": result.requested_k,
        "features": list(result.features),
        "fold_accuracies": [float(a) for a in result.fold_accuracies],
        "mean_accuracy": result.mean_accuracy,
    })
