import json
import math
import os

import pandas as pd
import pytest

from neural import CLASSICAL_CNN, QNN4EO
from workflows.comparison import (
    HARD_PAIR_THRESHOLD,
    ComparisonResult,
    TaskOutcome,
    build_table,
    compare_variants,
    mark_hard_pairs,
    read_comparison_csv,
    summary_lines,
    table_averages,
    write_comparison_outputs,
)
from workflows.comparison.comparison_report import format_delta, format_percent
from workflows.dataset import DatasetError, task_matrix
from workflows.metadata_generator import STATUS_FINISHED, load_metadata
from workflows.training import DataSource, TrainConfig, run_directory

FAST = TrainConfig(epochs=1, learning_rate=1e-3, batch_size=8, seed=2)
SOURCE = DataSource(kind="synthetic", class_a="smooth", class_b="blocks", n_per_class=6, image_size=28)
THREE = task_matrix(class_names=["blocks", "smooth", "stripes"])


def outcome(a, b, cnn, qnn, error=None):
    return TaskOutcome(task=(a, b), accuracies={CLASSICAL_CNN: cnn, QNN4EO: qnn}, error=error)


class TestBuildTable:
    def test_rows_sorted_and_delta(self):
        table = build_table([outcome("b", "c", [0.8], [0.9]), outcome("a", "c", [0.7], [0.6])])
        assert list(table["pair"]) == ["a vs c", "b vs c"]
        assert table.loc[0, "delta"] == pytest.approx(-0.1)
        assert table.loc[1, "delta"] == pytest.approx(0.1)
        assert list(table["error"]) == ["", ""]

    def test_repeats_averaged(self):
        table = build_table([outcome("a", "b", [0.8, 1.0], [0.5, 0.7])])
        row = table.iloc[0]
        assert row["cnn_acc"] == pytest.approx(0.9)
        assert row["qnn_std"] == pytest.approx(0.1)
        assert row["runs"] == 2

    def test_failed_task(self):
        table = build_table([outcome("a", "b", [0.8], [], error="DatasetError: boom")])
        row = table.iloc[0]
        assert math.isnan(row["cnn_acc"]) and math.isnan(row["delta"])
        assert row["error"] == "DatasetError: boom"
        assert row["runs"] == 0

    def test_incomplete_task(self):
        table = build_table([outcome("a", "b", [0.8, 0.9], [0.7])])
        assert table.iloc[0]["error"] == "incomplete"

    def test_averages_skip_failures(self):
        table = build_table([
            outcome("a", "b", [0.8], [0.9]),
            outcome("a", "c", [0.6], [0.6]),
            outcome("b", "c", [], [], error="x"),
        ])
        averages = table_averages(table)
        assert averages["tasks"] == 2
        assert averages["cnn_avg"] == pytest.approx(0.7)
        assert averages["qnn_avg"] == pytest.approx(0.75)
        assert averages["delta_avg"] == pytest.approx(0.05)

    def test_averages_when_everything_failed(self):
        averages = table_averages(build_table([outcome("a", "b", [], [], error="x")]))
        assert averages["tasks"] == 0
        assert math.isnan(averages["cnn_avg"])


class TestCompareVariants:
    def test_three_classes_three_rows(self, tmp_path):
        result = compare_variants(THREE, FAST, SOURCE, str(tmp_path), progress=False)
        table = result.table
        assert list(table["pair"]) == ["blocks vs smooth", "blocks vs stripes", "smooth vs stripes"]
        assert (table["error"] == "").all()
        assert ((table["qnn_acc"] - table["cnn_acc"]) == table["delta"]).all()
        assert result.averages["tasks"] == 3
        assert result.failed_tasks == []
        for a, b in THREE:
            for variant in (CLASSICAL_CNN, QNN4EO):
                directory = run_directory(str(tmp_path), (a, b), variant, FAST.seed)
                assert load_metadata(directory)["status"] == STATUS_FINISHED

    def test_resume_skips_finished_runs(self, tmp_path):
        first = compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), progress=False)
        again = compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), progress=False)
        assert again.outcomes[0].resumed == 2
        pd.testing.assert_frame_equal(first.table, again.table)

    def test_force_retrains(self, tmp_path):
        compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), progress=False)
        forced = compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), force=True, progress=False)
        assert forced.outcomes[0].resumed == 0

    def test_changed_settings_retrain(self, tmp_path):
        compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), progress=False)
        changed = FAST.model_copy(update={"learning_rate": 2e-3})
        result = compare_variants(THREE[:1], changed, SOURCE, str(tmp_path), progress=False)
        assert result.outcomes[0].resumed == 0

    def test_repeats_use_consecutive_seeds(self, tmp_path):
        result = compare_variants(THREE[:1], FAST, SOURCE, str(tmp_path), repeats=2, progress=False)
        assert result.table.iloc[0]["runs"] == 2
        for seed in (2, 3):
            assert os.path.isdir(run_directory(str(tmp_path), THREE[0], QNN4EO, seed))

    def test_failed_task_does_not_stop_others(self, tmp_path):
        tasks = [("blocks", "clouds"), ("blocks", "smooth")]
        result = compare_variants(tasks, FAST, SOURCE, str(tmp_path), progress=False)
        table = result.table
        assert table.iloc[0]["error"].startswith("DatasetError")
        assert table.iloc[1]["error"] == ""
        assert result.failed_tasks == [("blocks", "clouds")]
        assert result.averages["tasks"] == 1

    def test_workers_match_serial(self, tmp_path):
        serial = compare_variants(THREE, FAST, SOURCE, str(tmp_path / "serial"), progress=False)
        parallel = compare_variants(THREE, FAST, SOURCE, str(tmp_path / "parallel"), workers=2, progress=False)
        pd.testing.assert_frame_equal(serial.table, parallel.table)

    def test_invalid_arguments(self, tmp_path):
        with pytest.raises(ValueError):
            compare_variants(THREE, FAST, SOURCE, str(tmp_path), repeats=0, progress=False)
        with pytest.raises(DatasetError):
            compare_variants([], FAST, SOURCE, str(tmp_path), progress=False)


class TestComparisonReport:
    def test_formatting(self):
        assert format_percent(0.9473) == "94.73%"
        assert format_percent(float("nan")) == "-"
        assert format_delta(-0.015) == "-1.50 pp"

    def test_hard_pairs(self):
        table = build_table([outcome("a", "b", [0.85], [0.88]), outcome("a", "c", [0.95], [0.99]),
                             outcome("b", "c", [0.80], [0.70])])
        marked = mark_hard_pairs(table, HARD_PAIR_THRESHOLD)
        assert list(marked["hard"]) == [True, False, True]
        assert list(marked["mitigated"]) == [True, False, False]

    def test_summary_lines(self):
        table = build_table([outcome("a", "b", [0.9], [0.95]), outcome("a", "c", [], [], error="boom")])
        lines = summary_lines(table, table_averages(table))
        assert "90.00%" in lines[0] and "+5.00 pp" in lines[0]
        assert "FAILED: boom" in lines[1]
        assert lines[-1].startswith("Average over 1 task(s)")

    def test_outputs_written(self, tmp_path):
        result = compare_variants(THREE[:2], FAST, SOURCE, str(tmp_path / "runs"), progress=False)
        paths = write_comparison_outputs(result, str(tmp_path / "report"))

        table = read_comparison_csv(paths["csv"])
        assert list(table["pair"]) == list(result.table["pair"])
        pd.testing.assert_series_equal(table["cnn_acc"], result.table["cnn_acc"], atol=1e-6)

        with open(paths["json"]) as f:
            payload = json.load(f)
        assert payload["schema_version"] == 1
        assert len(payload["rows"]) == 2
        assert payload["averages"]["tasks"] == 2

        with open(paths["html"]) as f:
            html = f.read()
        assert "blocks vs smooth" in html

    def test_outputs_replaced_atomically(self, tmp_path, monkeypatch):
        table = build_table([outcome("a", "b", [0.9], [0.95])])
        result = ComparisonResult(table=table, averages=table_averages(table), outcomes=[])
        csv_path = tmp_path / "comparison.csv"
        csv_path.write_text("previous table\n")

        def interrupted(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(os, "replace", interrupted)
        with pytest.raises(OSError, match="disk full"):
            write_comparison_outputs(result, str(tmp_path))
        monkeypatch.undo()

        assert csv_path.read_text() == "previous table\n"
        assert sorted(p.name for p in tmp_path.iterdir()) == ["comparison.csv"]

        paths = write_comparison_outputs(result, str(tmp_path))
        assert read_comparison_csv(paths["csv"])["pair"].tolist() == list(table["pair"])
        assert sorted(p.name for p in tmp_path.iterdir()) == ["comparison.csv", "comparison.html", "comparison.json"]

    def test_failed_rows_serialise_as_null(self, tmp_path):
        table = build_table([outcome("a", "b", [], [], error="boom")])
        result = ComparisonResult(table=table, averages=table_averages(table), outcomes=[])
        payload = result.to_json_dict()
        assert payload["rows"][0]["cnn_acc"] is None
        assert payload["averages"]["cnn_avg"] is None
        paths = write_comparison_outputs(result, str(tmp_path))
        with open(paths["html"]) as f:
            assert "boom" in f.read()
