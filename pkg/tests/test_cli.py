"""End-to-end tests for the rulegraph command line."""

import json

import numpy as np
import pydot
import pytest
from loguru import logger

from src.dataset import write_csv
from src.graph import read_graph_csv
from src.main import main, parse_depths


@pytest.fixture(autouse=True)
def reset_logging(clean_env):
    """main() binds loguru to the captured stderr; drop the sinks afterwards."""
    yield
    logger.remove()


@pytest.fixture
def separable_csv(separable_ds, tmp_path):
    return write_csv(separable_ds, tmp_path / "sep.csv", target="y")


def _train(csv_path, out_dir, *extra):
    return main([
        "train", str(csv_path),
        "--target", "y",
        "--out", str(out_dir),
        "--depths", "1,2",
        "--min-leaf", "1",
        "--outer-folds", "2",
        "--inner-folds", "2",
        "--seed", "3",
        "--quiet",
        *extra,
    ])


class TestParseDepths:
    """Test the --depths syntax."""

    def test_range(self):
        assert parse_depths("3..8") == [3, 4, 5, 6, 7, 8]

    def test_list(self):
        assert parse_depths("3, 5,none") == [3, 5, None]

    def test_invalid(self):
        with pytest.raises(Exception, match="invalid depth list"):
            parse_depths("three")


class TestExitCodes:
    """Test usage (2) and computational (1) failures."""

    def test_missing_target(self, toy_csv, toy_rules_path):
        assert main(["graph", str(toy_csv), str(toy_rules_path)]) == 2

    def test_unknown_subcommand(self):
        assert main(["plot"]) == 2

    def test_gini_needs_model(self, toy_csv, toy_rules_path):
        code = main(["importance", str(toy_csv), "--target", "y", "--rules", str(toy_rules_path), "--method", "gini"])
        assert code == 2

    def test_unknown_method(self, toy_csv, toy_rules_path):
        code = main(["importance", str(toy_csv), "--target", "y", "--rules", str(toy_rules_path), "--method", "shap"])
        assert code == 1

    def test_unknown_class(self, toy_csv, toy_rules_path):
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--class", "7"]) == 1

    def test_missing_dataset(self, tmp_path, toy_rules_path):
        assert main(["graph", str(tmp_path / "nope.csv"), str(toy_rules_path), "--target", "y"]) == 1

    def test_bad_rules(self, tmp_path, toy_csv):
        rules = tmp_path / "bad.rules"
        rules.write_text("f > AND => 1\n", encoding="utf-8")
        assert main(["graph", str(toy_csv), str(rules), "--target", "y"]) == 1

    def test_format_not_supported(self, toy_csv, toy_rules_path):
        code = main(["compare", str(toy_csv), str(toy_rules_path), "--target", "y", "--format", "dot"])
        assert code == 2

    def test_bad_jobs(self, toy_csv, toy_rules_path):
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--jobs", "0"]) == 2

    def test_single_depth_stability(self, separable_csv):
        assert main(["stability", str(separable_csv), "--target", "y", "--depths", "3"]) == 1

    def test_stability_needs_models(self, separable_csv):
        assert main(["stability", str(separable_csv), "--target", "y"]) == 2

    def test_train_needs_out(self, separable_csv):
        assert main(["train", str(separable_csv), "--target", "y"]) == 2

    def test_bad_synth_interval(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"relevant": [{"index": 0, "intervals": [[0.6, 0.2]]}]}), encoding="utf-8")
        assert main(["synth", "--config", str(spec), "--out", str(tmp_path / "suite")]) == 2


class TestGraphCommand:
    """Test graph export and where the ranking goes."""

    def test_dot_to_file(self, tmp_path, toy_csv, toy_rules_path, capsys):
        out = tmp_path / "toy.dot"
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--out", str(out)]) == 0
        assert out.read_text(encoding="utf-8").lstrip().startswith("graph")
        stdout = capsys.readouterr().out
        assert stdout.startswith("Feature importance (graph-centrality)")

    def test_csv_document(self, tmp_path, toy_csv, toy_rules_path):
        out = tmp_path / "toy.csv"
        code = main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--format", "csv", "--out", str(out)])
        assert code == 0
        names, matrix = read_graph_csv(out.read_text(encoding="utf-8"))
        assert names == ("f", "g", "color")
        assert matrix.sum() == pytest.approx(100.0)
        np.testing.assert_array_equal(matrix, matrix.T)

    def test_class_filter(self, tmp_path, toy_csv, toy_rules_path):
        out = tmp_path / "class0.json"
        code = main([
            "graph", str(toy_csv), str(toy_rules_path),
            "--target", "y", "--class", "0", "--format", "json", "--out", str(out),
        ])
        assert code == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["features"] == ["f", "g", "color"]

    def test_jsonl_log_file(self, tmp_path, toy_csv, toy_rules_path):
        log_dir = tmp_path / "logs"
        code = main([
            "graph", str(toy_csv), str(toy_rules_path),
            "--target", "y", "--out", str(tmp_path / "g.dot"), "--log-dir", str(log_dir),
        ])
        assert code == 0
        logger.remove()
        entries = [json.loads(line) for line in (log_dir / "rulegraph.log").read_text(encoding="utf-8").splitlines()]
        start = next(e for e in entries if e["message"].startswith("rulegraph v"))
        assert start["level"] == "INFO"
        assert start["context"]["name"] == "src.main"

    def test_stdout_csv_is_the_whole_document(self, toy_csv, toy_rules_path, capsys):
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--format", "csv", "--quiet"]) == 0
        captured = capsys.readouterr()
        names, matrix = read_graph_csv(captured.out)
        assert names == ("f", "g", "color")
        assert matrix.sum() == pytest.approx(100.0)
        assert "Feature importance (graph-centrality)" in captured.err

    def test_stdout_json_parses(self, toy_csv, toy_rules_path, capsys):
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--format", "json", "--quiet"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["features"] == ["f", "g", "color"]

    def test_stdout_dot_parses(self, toy_csv, toy_rules_path, capsys):
        assert main(["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--quiet"]) == 0
        parsed = pydot.graph_from_dot_data(capsys.readouterr().out)
        assert len(parsed) == 1
        assert len(parsed[0].get_nodes()) >= 3


class TestCompareCommand:
    """Test pairwise distances."""

    def test_self_distance(self, toy_csv, toy_rules_path, capsys):
        code = main([
            "compare", str(toy_csv), str(toy_rules_path), str(toy_rules_path),
            "--target", "y", "--format", "json",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["distances"] == [[0.0, 0.0], [0.0, 0.0]]


class TestSynthCommand:
    """Test suite generation from a spec file."""

    def test_config_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps([
            {"name": "a", "n_samples": 30, "relevant": [{"index": 0, "mode": "combined"}, {"index": 1, "mode": "combined"}]},
            {"name": "b", "n_samples": 30, "relevant": [{"index": 2, "intervals": [[0.1, 0.6]]}]},
        ]), encoding="utf-8")
        out = tmp_path / "suite"
        assert main(["synth", "--config", str(spec), "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert [d["file"] for d in manifest["datasets"]] == ["a.csv", "b.csv"]
        assert len((out / "a.csv").read_text(encoding="utf-8").splitlines()) == 31


class TestTrainCommand:
    """Test nested cross-validation output."""

    def test_writes_fold_files(self, tmp_path, separable_csv, capsys):
        out = tmp_path / "models"
        assert _train(separable_csv, out) == 0
        for fold in (1, 2):
            assert (out / f"sep_fold{fold}.rules").exists()
            assert (out / f"sep_fold{fold}.json").exists()
            assert (out / f"sep_fold{fold}.tree.json").exists()
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["outer_folds"] == 2
        assert summary["folds"][0]["rules_file"] == "sep_fold1.rules"
        assert summary["mean_accuracy"] >= 0.9
        assert capsys.readouterr().out.startswith("Nested cross-validation on sep")

    def test_byte_identical_reruns(self, tmp_path, separable_csv):
        assert _train(separable_csv, tmp_path / "a") == 0
        assert _train(separable_csv, tmp_path / "b", "--jobs", "2") == 0
        for name in ("sep_fold1.rules", "sep_fold2.json", "summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestImportanceCommand:
    """Test importance methods and the top-k loop."""

    def test_rules_methods(self, toy_csv, toy_rules_path, capsys):
        for method in ("graph", "frequency"):
            code = main([
                "importance", str(toy_csv), "--target", "y",
                "--rules", str(toy_rules_path), "--method", method, "--format", "json",
            ])
            assert code == 0
            payload = json.loads(capsys.readouterr().out)
            assert payload["features"] == ["f", "g", "color"]

    def test_gini_from_model_with_topk(self, tmp_path, separable_csv, capsys):
        assert _train(separable_csv, tmp_path / "models") == 0
        capsys.readouterr()
        code = main([
            "importance", str(separable_csv), "--target", "y",
            "--model", str(tmp_path / "models" / "sep_fold1.tree.json"),
            "--method", "gini", "--topk", "5", "--seed", "3",
        ])
        assert code == 0
        text = capsys.readouterr().out
        assert text.startswith("Feature importance (gini)")
        assert "(k clamped from 5)" in text

    def test_permutation_from_rules(self, tmp_path, separable_csv, capsys):
        assert _train(separable_csv, tmp_path / "models") == 0
        capsys.readouterr()
        code = main([
            "importance", str(separable_csv), "--target", "y",
            "--rules", str(tmp_path / "models" / "sep_fold1.rules"),
            "--method", "permutation", "--format", "csv",
        ])
        assert code == 0
        assert capsys.readouterr().out.startswith("feature,score,rank\n")


class TestStabilityCommand:
    """Test rank stability output."""

    def test_depths(self, separable_csv, capsys):
        code = main([
            "stability", str(separable_csv), "--target", "y",
            "--depths", "1..3", "--methods", "graph,gini,frequency", "--format", "json",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["models"] == ["depth=1", "depth=2", "depth=3"]
        assert set(payload["mean_rho"]) == {"graph-centrality", "gini", "frequency"}
        assert all(-1.0 <= rho <= 1.0 for rho in payload["mean_rho"].values())


class TestRerunsAreIdentical:
    """Primary output is byte-identical across reruns with the same seed."""

    @pytest.fixture
    def separable_rules(self, tmp_path):
        path = tmp_path / "sep.rules"
        path.write_text("x <= 0.5 => a\nx > 0.5 => b\nz > 0.5 AND x > 0.3 => b\n", encoding="utf-8")
        return path

    @staticmethod
    def _stdout_twice(capsys, argv):
        outputs = []
        for _ in range(2):
            assert main([*argv, "--quiet"]) == 0
            outputs.append(capsys.readouterr().out)
        return outputs

    @pytest.mark.parametrize("fmt", ["dot", "graphml", "json", "csv"])
    def test_graph(self, capsys, toy_csv, toy_rules_path, fmt):
        first, second = self._stdout_twice(
            capsys, ["graph", str(toy_csv), str(toy_rules_path), "--target", "y", "--format", fmt]
        )
        assert first == second
        assert first

    def test_compare(self, capsys, separable_csv, separable_rules, toy_rules_path):
        other = separable_rules.with_name("other.rules")
        other.write_text("z <= 0.4 => a\nTRUE => b\n", encoding="utf-8")
        first, second = self._stdout_twice(
            capsys,
            ["compare", str(separable_csv), str(separable_rules), str(other), "--target", "y", "--format", "csv"],
        )
        assert first == second
        assert first.startswith(",sep.rules,other.rules\n")

    def test_permutation_importance_with_topk(self, capsys, separable_csv, separable_rules):
        argv = [
            "importance", str(separable_csv), "--target", "y",
            "--rules", str(separable_rules), "--method", "permutation",
            "--topk", "1", "--seed", "11", "--format", "json",
        ]
        first, second = self._stdout_twice(capsys, argv)
        assert first == second
        payload = json.loads(first)
        assert payload["topk"]["features"] == ["x"]

    def test_stability(self, capsys, separable_csv):
        argv = [
            "stability", str(separable_csv), "--target", "y",
            "--folds", "3", "--methods", "graph,gini,permutation", "--seed", "2", "--format", "json",
        ]
        first, second = self._stdout_twice(capsys, argv)
        assert first == second
        assert json.loads(first)["models"] == ["fold1", "fold2", "fold3"]
