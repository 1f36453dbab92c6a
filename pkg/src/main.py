"""Command-line entry point: train, graph, compare, importance, synth, stability."""

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, field_validator

from . import __version__
from .config import FEATURE_METRICS, RULE_METRICS, Config, TreeGrid, ValidationConfig
from .dataset import Dataset, load_csv
from .graph import CENTRALITY_METHOD, GRAPH_FORMATS, build_graph, distance_matrix, export_graph, feature_importance
from .learner import (
    GINI_METHOD,
    PERMUTATION_METHOD,
    RuleSetClassifier,
    cross_validate,
    frequency_importance,
    gini_importance,
    load_tree,
    permutation_importance,
    resolve_method,
    save_tree,
    stability_report,
    topk_evaluation,
)
from .logger import get_logger, setup_logging
from .reporting import (
    ImportanceReport,
    format_distance_csv,
    format_distance_json,
    format_distance_text,
    format_importance_csv,
    format_importance_json,
    format_importance_text,
    format_stability_csv,
    format_stability_json,
    format_stability_text,
    format_topk_json,
    format_topk_text,
    format_training_json,
    format_training_text,
)
from .rules import RuleSet, format_rules, load_rules, rules_to_json, tree_to_rules
from .synth import SynthSpec, preset_suite, write_suite

logger = get_logger(__name__)

OUTPUT_FORMATS = ("json", "csv", "dot", "graphml", "text")
SUBCOMMANDS = ("train", "graph", "compare", "importance", "synth", "stability")


class UsageError(ValueError):
    """Invalid flag combination detected after parsing; exit code 2."""


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""
    subcommand: str
    dataset: Optional[Path] = None
    rules: List[Path] = Field(default_factory=list)
    model: Optional[Path] = None
    target: Optional[str] = None
    feature_metric: str = "error-increase"
    rule_metric: str = "covering-error"
    class_filter: Optional[str] = None
    format: Optional[str] = None
    out: Optional[Path] = None
    seed: int = Field(default=0, ge=0)
    jobs: int = 1
    omit_self_edges: bool = False
    depths: Optional[List[Optional[int]]] = None
    folds: Optional[int] = Field(default=None, ge=2)
    methods: List[str] = Field(default_factory=list)
    method: Optional[str] = None
    topk: Optional[int] = None
    preset: Optional[str] = None
    spec_path: Optional[Path] = None

    @field_validator("subcommand")
    @classmethod
    def validate_subcommand(cls, v: str) -> str:
        if v not in SUBCOMMANDS:
            raise ValueError(f"Invalid subcommand: {v}. Valid: {list(SUBCOMMANDS)}")
        return v

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in OUTPUT_FORMATS:
            raise ValueError(f"Invalid format: {v}. Valid: {list(OUTPUT_FORMATS)}")
        return v


# Argument parsing

def parse_depths(text: str) -> List[Optional[int]]:
    """``3..8`` (inclusive range) or a comma list such as ``3,5,none``."""
    text = text.strip().lower()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [None if part.strip() == "none" else int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid depth list '{text}' (use 3..8 or 3,4,none)")


def _comma_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for every random choice (default: RULEGRAPH_SEED or 0)")
    common.add_argument("--jobs", type=int, default=None, help="Parallel workers, -1 for all cores")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format")
    common.add_argument("--out", type=Path, default=None, help="Output file (directory for train/synth)")
    common.add_argument("--quiet", action="store_true", help="Only warnings and errors on stderr")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")
    common.add_argument("--config-path", type=str, default=None, help="Path to .env configuration file")
    common.add_argument("--log-dir", type=str, default=None, help="Directory for the JSONL log file")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("dataset", type=Path, help="Dataset CSV with a header row")
    data.add_argument("--target", required=True, help="Target column name")

    metrics = argparse.ArgumentParser(add_help=False)
    metrics.add_argument("--feature-metric", choices=FEATURE_METRICS, default=None)
    metrics.add_argument("--rule-metric", choices=RULE_METRICS, default=None)

    parser = argparse.ArgumentParser(
        prog="rulegraph",
        description="Feature graphs and feature importance for rule-based classifiers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"rulegraph v{__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    train = sub.add_parser("train", parents=[common, data], help="Nested CV of trees; writes per-fold rule sets")
    train.add_argument("--depths", type=parse_depths, default=None, help="max_depth grid, e.g. 3..8 or 3,5,none")
    train.add_argument("--min-leaf", type=lambda s: [int(v) for v in _comma_list(s)], default=None,
                       help="min_samples_leaf grid, e.g. 1,5,10")
    train.add_argument("--outer-folds", type=int, default=None)
    train.add_argument("--inner-folds", type=int, default=None)

    graph = sub.add_parser("graph", parents=[common, data, metrics], help="Build and export a feature graph")
    graph.add_argument("rules", type=Path, help="Rule file (DSL, or .json)")
    graph.add_argument("--class", dest="class_filter", default=None, help="Only rules predicting this class")
    graph.add_argument("--omit-self-edges", action="store_true", help="Drop self-edges from the exported edges")

    compare = sub.add_parser("compare", parents=[common, data, metrics], help="Pairwise Frobenius distances")
    compare.add_argument("rules", type=Path, nargs="+", help="Rule files to compare")
    compare.add_argument("--class", dest="class_filter", default=None)

    importance = sub.add_parser("importance", parents=[common, data, metrics], help="Feature importance report")
    importance.add_argument("--rules", type=Path, default=None, help="Rule file")
    importance.add_argument("--model", type=Path, default=None, help="Tree JSON written by train")
    importance.add_argument("--method", default="graph", help="graph, gini, permutation or frequency")
    importance.add_argument("--topk", type=int, default=None, help="Retrain on the top-k features and report accuracy")

    synth = sub.add_parser("synth", parents=[common], help="Write synthetic datasets and a manifest")
    source = synth.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", dest="spec_path", type=Path, help="JSON spec object or list of spec objects")
    source.add_argument("--preset", choices=["paper"], help="Full 150-dataset benchmark suite")

    stability = sub.add_parser("stability", parents=[common, data, metrics], help="Rank stability across trees")
    models = stability.add_mutually_exclusive_group(required=True)
    models.add_argument("--depths", type=parse_depths, help="One tree per max_depth, e.g. 3..8")
    models.add_argument("--folds", type=int, help="One tree per training fold")
    stability.add_argument("--methods", type=_comma_list, default=["graph", GINI_METHOD],
                           help="Comma list of graph, gini, permutation, frequency")

    return parser


def apply_overrides(config: Config, args: argparse.Namespace) -> Config:
    """CLI flags win over RULEGRAPH_* environment values."""
    updates: Dict[str, object] = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.jobs is not None:
        updates["jobs"] = args.jobs
    if args.log_dir is not None:
        updates["log_directory"] = Path(args.log_dir)
    if args.debug:
        updates["debug"] = True
    if args.quiet:
        updates["quiet"] = True

    analysis: Dict[str, object] = {}
    for key in ("feature_metric", "rule_metric"):
        if getattr(args, key, None) is not None:
            analysis[key] = getattr(args, key)
    if analysis:
        updates["analysis"] = config.analysis.model_copy(update=analysis)

    validation: Dict[str, object] = {}
    for key in ("outer_folds", "inner_folds"):
        if getattr(args, key, None) is not None:
            validation[key] = getattr(args, key)
    grid: Dict[str, object] = {}
    if args.command == "train" and args.depths is not None:
        grid["max_depth"] = args.depths
    if getattr(args, "min_leaf", None) is not None:
        grid["min_samples_leaf"] = args.min_leaf
    if grid:
        validation["grid"] = TreeGrid(**{**config.validation.grid.model_dump(), **grid})
    if validation:
        merged = {**config.validation.model_dump(), **validation}
        updates["validation"] = ValidationConfig.model_validate(merged)

    return dataclasses.replace(config, **updates) if updates else config


def to_run_config(args: argparse.Namespace, config: Config) -> RunConfig:
    rules = getattr(args, "rules", None)
    if isinstance(rules, Path):
        rules = [rules]
    return RunConfig(
        subcommand=args.command,
        dataset=getattr(args, "dataset", None),
        rules=rules or [],
        model=getattr(args, "model", None),
        target=getattr(args, "target", None),
        feature_metric=config.analysis.feature_metric,
        rule_metric=config.analysis.rule_metric,
        class_filter=getattr(args, "class_filter", None),
        format=args.format,
        out=args.out,
        seed=config.seed,
        jobs=config.jobs,
        omit_self_edges=getattr(args, "omit_self_edges", False),
        depths=getattr(args, "depths", None) if args.command == "stability" else None,
        folds=getattr(args, "folds", None),
        methods=getattr(args, "methods", None) or [],
        method=getattr(args, "method", None),
        topk=getattr(args, "topk", None),
        preset=getattr(args, "preset", None),
        spec_path=getattr(args, "spec_path", None),
    )


# Output

def emit(text: str, out: Optional[Path]) -> None:
    """Write primary output to ``out`` or stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {out}")


def _pick(fmt: Optional[str], default: str, allowed: Sequence[str], command: str) -> str:
    fmt = fmt or default
    if fmt not in allowed:
        raise UsageError(f"{command} supports --format {', '.join(allowed)}, got '{fmt}'")
    return fmt


def _load_dataset(run: RunConfig, config: Config) -> Dataset:
    return load_csv(run.dataset, run.target, strict=config.analysis.strict_missing)


# Subcommands

def cmd_train(run: RunConfig, config: Config) -> int:
    if run.out is None:
        raise UsageError("train needs --out DIR for the per-fold rule sets")
    fmt = _pick(run.format, "text", ("text", "json"), "train")
    ds = _load_dataset(run, config)
    result = cross_validate(ds, config.validation, seed=run.seed, jobs=run.jobs)

    run.out.mkdir(parents=True, exist_ok=True)
    stem = run.dataset.stem
    rule_files = []
    for fold in result.folds:
        base = run.out / f"{stem}_fold{fold.fold}"
        (base.with_suffix(".rules")).write_text(format_rules(fold.rules), encoding="utf-8")
        (base.with_suffix(".json")).write_text(rules_to_json(fold.rules), encoding="utf-8")
        save_tree(fold.tree, run.out / f"{stem}_fold{fold.fold}.tree.json")
        rule_files.append(base.with_suffix(".rules").name)

    summary = result.summary(rule_files)
    summary.metadata = {"grid": config.validation.grid.model_dump(), "inner_folds": config.validation.inner_folds}
    (run.out / "summary.json").write_text(format_training_json(summary), encoding="utf-8")
    sys.stdout.write(format_training_text(summary) if fmt == "text" else format_training_json(summary))
    return 0


def cmd_graph(run: RunConfig, config: Config) -> int:
    fmt = _pick(run.format, "dot", GRAPH_FORMATS, "graph")
    ds = _load_dataset(run, config)
    rs = load_rules(run.rules[0])
    g = build_graph(
        ds,
        rs,
        class_filter=run.class_filter,
        feature_metric=run.feature_metric,
        rule_metric=run.rule_metric,
        log_space_threshold=config.analysis.log_space_threshold,
        jobs=run.jobs,
    )
    emit(export_graph(g, fmt, omit_self_edges=run.omit_self_edges), run.out)
    # stdout holds the document when there is no --out
    ranking = sys.stdout if run.out is not None else sys.stderr
    ranking.write(format_importance_text(feature_importance(g)))
    return 0


def cmd_compare(run: RunConfig, config: Config) -> int:
    fmt = _pick(run.format, "text", ("text", "csv", "json"), "compare")
    ds = _load_dataset(run, config)
    labels, graphs = [], []
    for path in run.rules:
        graphs.append(build_graph(
            ds,
            load_rules(path),
            class_filter=run.class_filter,
            feature_metric=run.feature_metric,
            rule_metric=run.rule_metric,
            log_space_threshold=config.analysis.log_space_threshold,
            jobs=run.jobs,
        ))
        labels.append(path.name)
    matrix = distance_matrix(graphs)
    formatter: Dict[str, Callable] = {"text": format_distance_text, "csv": format_distance_csv, "json": format_distance_json}
    emit(formatter[fmt](labels, matrix), run.out)
    return 0


def _importance_report(run: RunConfig, config: Config, ds: Dataset) -> ImportanceReport:
    method = resolve_method(run.method)
    tree = load_tree(run.model) if run.model is not None else None
    rules: Optional[RuleSet] = load_rules(run.rules[0]) if run.rules else None
    if rules is None and tree is not None:
        rules = tree_to_rules(tree)

    if method == GINI_METHOD:
        if tree is None:
            raise UsageError("gini importance needs a tree model (--model)")
        return gini_importance(tree, ds)
    if rules is None:
        raise UsageError(f"{method} importance needs --rules or --model")
    if method == PERMUTATION_METHOD:
        predictor = tree if tree is not None else RuleSetClassifier.fit(ds, rules, run.feature_metric, run.rule_metric)
        return permutation_importance(predictor, ds, config.analysis.permutation_repeats, run.seed, run.jobs)
    if method == CENTRALITY_METHOD:
        return feature_importance(build_graph(
            ds,
            rules,
            class_filter=run.class_filter,
            feature_metric=run.feature_metric,
            rule_metric=run.rule_metric,
            log_space_threshold=config.analysis.log_space_threshold,
            jobs=run.jobs,
        ))
    return frequency_importance(rules, ds.feature_names)


def cmd_importance(run: RunConfig, config: Config) -> int:
    fmt = _pick(run.format, "text", ("text", "csv", "json"), "importance")
    ds = _load_dataset(run, config)
    report = _importance_report(run, config, ds)

    if fmt == "csv":
        text = format_importance_csv(report)
    elif fmt == "json":
        text = format_importance_json(report)
    else:
        text = format_importance_text(report)

    if run.topk is not None:
        topk = topk_evaluation(ds, report, run.topk, config.validation, seed=run.seed, jobs=run.jobs)
        if fmt == "json":
            payload = json.loads(text)
            payload["topk"] = json.loads(format_topk_json(topk))
            text = json.dumps(payload, indent=2) + "\n"
        elif fmt == "text":
            text += format_topk_text(topk)
        else:
            sys.stderr.write(format_topk_text(topk))
    emit(text, run.out)
    return 0


def _read_specs(path: Path) -> List[SynthSpec]:
    raw = json.loads(path.read_text(encoding="utf-8"))
    items = raw if isinstance(raw, list) else [raw]
    return [SynthSpec.model_validate(item) for item in items]


def cmd_synth(run: RunConfig, config: Config) -> int:
    if run.out is None:
        raise UsageError("synth needs --out DIR")
    specs = preset_suite(seed_base=run.seed) if run.preset == "paper" else _read_specs(run.spec_path)
    manifest = write_suite(specs, run.out, jobs=run.jobs)
    sys.stdout.write(f"{len(specs)} datasets written, manifest {manifest}\n")
    return 0


def cmd_stability(run: RunConfig, config: Config) -> int:
    fmt = _pick(run.format, "text", ("text", "csv", "json"), "stability")
    ds = _load_dataset(run, config)
    table = stability_report(
        ds,
        depths=run.depths,
        folds=run.folds,
        methods=run.methods,
        analysis=config.analysis,
        seed=run.seed,
        jobs=run.jobs,
    )
    formatter = {"text": format_stability_text, "csv": format_stability_csv, "json": format_stability_json}
    emit(formatter[fmt](table), run.out)
    return 0


COMMANDS: Dict[str, Callable[[RunConfig, Config], int]] = {
    "train": cmd_train,
    "graph": cmd_graph,
    "compare": cmd_compare,
    "importance": cmd_importance,
    "synth": cmd_synth,
    "stability": cmd_stability,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 on computational errors, 2 on usage or validation errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2

    try:
        config = apply_overrides(Config.from_env(args.config_path), args)
        config.validate()
    except (ValueError, ValidationError) as e:
        print(f"Configuration Error: {e}", file=sys.stderr)
        return 2

    setup_logging(
        log_dir=config.log_directory,
        debug=config.debug,
        quiet=config.quiet and not config.debug,
        level=config.log_level,
    )

    started = time.time()
    logger.info(f"rulegraph v{__version__}: {args.command}")
    try:
        run = to_run_config(args, config)
        code = COMMANDS[run.subcommand](run, config)
    except ValidationError as e:
        logger.error(f"Invalid {args.command} input:\n{e}")
        return 2
    except UsageError as e:
        logger.error(str(e))
        return 2
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1

    logger.info(f"{args.command} finished in {time.time() - started:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
