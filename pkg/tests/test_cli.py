import os

import pandas as pd
import pytest

import comparison_workflow_cli
import eval_workflow_cli
import qnn4eo_cli
import train_workflow_cli
from workflows.metadata_generator import STATUS_FAILED, STATUS_FINISHED, load_metadata
from workflows.training import CHECKPOINT_FILENAME, RunReport, run_directory

FAST_FLAGS = ["--synthetic", "8", "--image-size", "28", "--epochs", "2", "--batch-size", "8", "--lr", "0.001"]


def checkpoint_path(out_dir, task=("smooth", "blocks"), variant="qnn4eo", seed=0):
    return os.path.join(run_directory(str(out_dir), task, variant, seed), CHECKPOINT_FILENAME)


def read_report(out_dir, task=("smooth", "blocks"), variant="qnn4eo", seed=0):
    path = os.path.join(run_directory(str(out_dir), task, variant, seed), "report.json")
    with open(path) as f:
        return RunReport.model_validate_json(f.read())


class TestTrainCli:
    def test_trains_and_reports(self, tmp_path, capsys):
        code = train_workflow_cli.main(FAST_FLAGS + ["--seed", "4", "--out", str(tmp_path)])
        assert code == 0
        report = read_report(tmp_path, seed=4)
        out = capsys.readouterr().out
        assert f"Validation accuracy: {100.0 * report.val_accuracy:.2f}%" in out
        assert os.path.exists(checkpoint_path(tmp_path, seed=4))

    def test_variant_flag(self, tmp_path):
        assert train_workflow_cli.main(FAST_FLAGS + ["--variant", "classical-cnn", "--out", str(tmp_path)]) == 0
        assert read_report(tmp_path, variant="classical-cnn").variant == "classical-cnn"

    def test_eurosat_tree(self, tmp_path, eurosat_root):
        argv = ["--data-root", eurosat_root, "--classes", "Forest", "River", "--epochs", "1",
                "--batch-size", "4", "--out", str(tmp_path / "out")]
        assert train_workflow_cli.main(argv) == 0
        report = read_report(tmp_path / "out", task=("Forest", "River"))
        assert report.train_size + report.val_size == 10

    def test_missing_class_is_runtime_failure(self, tmp_path, eurosat_root, capsys):
        argv = ["--data-root", eurosat_root, "--classes", "Forest", "Pasture", "--out", str(tmp_path / "out")]
        assert train_workflow_cli.main(argv) == 1
        assert "Missing class directory" in capsys.readouterr().err
        directory = run_directory(str(tmp_path / "out"), ("Forest", "Pasture"), "qnn4eo", 0)
        assert load_metadata(directory)["status"] == STATUS_FAILED

    @pytest.mark.parametrize("flags", [["--epochs", "0"], ["--variant", "mlp"], ["--shift", "0"]])
    def test_usage_errors(self, tmp_path, flags):
        with pytest.raises(SystemExit) as excinfo:
            train_workflow_cli.main(FAST_FLAGS + flags + ["--out", str(tmp_path)])
        assert excinfo.value.code == 2


class TestEvalCli:
    def test_matches_training_accuracy(self, tmp_path, capsys):
        train_workflow_cli.main(FAST_FLAGS + ["--out", str(tmp_path)])
        report = read_report(tmp_path)
        capsys.readouterr()
        assert eval_workflow_cli.main([checkpoint_path(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert f"validation accuracy {100.0 * report.val_accuracy:.2f}%" in out

    def test_explicit_data_uses_stored_pair(self, tmp_path, capsys):
        train_workflow_cli.main(FAST_FLAGS + ["--classes", "stripes", "speckle", "--out", str(tmp_path)])
        report = read_report(tmp_path, task=("stripes", "speckle"))
        capsys.readouterr()
        path = checkpoint_path(tmp_path, task=("stripes", "speckle"))
        assert eval_workflow_cli.main([path, "--synthetic", "8", "--image-size", "28"]) == 0
        out = capsys.readouterr().out
        assert "stripes vs speckle" in out
        assert f"{100.0 * report.val_accuracy:.2f}%" in out

    def test_shape_mismatch(self, tmp_path, capsys):
        train_workflow_cli.main(FAST_FLAGS + ["--out", str(tmp_path)])
        code = eval_workflow_cli.main([checkpoint_path(tmp_path), "--synthetic", "8", "--image-size", "28",
                                       "--grayscale"])
        assert code == 1
        assert "check --grayscale" in capsys.readouterr().err

    def test_missing_checkpoint(self, tmp_path, capsys):
        assert eval_workflow_cli.main([str(tmp_path / "absent.npz")]) == 1
        assert "Error:" in capsys.readouterr().err


class TestCompareCli:
    def test_writes_table(self, tmp_path, capsys):
        argv = FAST_FLAGS + ["--epochs", "1", "--classes", "smooth", "blocks", "stripes", "--out", str(tmp_path)]
        assert comparison_workflow_cli.main(argv) == 0
        comparison_dir = tmp_path / "comparison_synthetic"
        table = pd.read_csv(comparison_dir / "comparison.csv")
        assert list(table["pair"]) == ["blocks vs smooth", "blocks vs stripes", "smooth vs stripes"]
        assert (comparison_dir / "comparison.html").exists()
        assert load_metadata(str(comparison_dir))["status"] == STATUS_FINISHED
        assert "Average over 3 task(s)" in capsys.readouterr().out

    def test_failed_task_exit_code(self, tmp_path, capsys):
        argv = FAST_FLAGS + ["--epochs", "1", "--classes", "smooth", "clouds", "--out", str(tmp_path)]
        assert comparison_workflow_cli.main(argv) == 1
        assert "clouds vs smooth" in capsys.readouterr().err
        assert load_metadata(str(tmp_path / "comparison_synthetic"))["status"] == STATUS_FAILED

    def test_single_class_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            comparison_workflow_cli.main(FAST_FLAGS + ["--classes", "smooth", "--out", str(tmp_path)])
        assert excinfo.value.code == 2

    def test_bad_repeats(self, tmp_path):
        with pytest.raises(SystemExit):
            comparison_workflow_cli.main(FAST_FLAGS + ["--repeats", "0", "--out", str(tmp_path)])


class TestUnifiedCli:
    def test_train_then_eval(self, tmp_path, capsys):
        assert qnn4eo_cli.main(["train"] + FAST_FLAGS + ["--out", str(tmp_path)]) == 0
        assert qnn4eo_cli.main(["eval", checkpoint_path(tmp_path)]) == 0
        assert "qnn4eo on smooth vs blocks" in capsys.readouterr().out

    def test_compare_subcommand(self, tmp_path):
        argv = ["compare"] + FAST_FLAGS + ["--epochs", "1", "--classes", "smooth", "blocks", "--out", str(tmp_path)]
        assert qnn4eo_cli.main(argv) == 0

    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as excinfo:
            qnn4eo_cli.main([])
        assert excinfo.value.code == 2
