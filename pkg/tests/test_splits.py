import numpy as np
import pytest

from workflows.dataset import DatasetError, SplitError, TaskDataset, split, task_matrix

EUROSAT_CLASSES = [
    "AnnualCrop", "Forest", "HerbaceousVegetation", "Highway", "Industrial",
    "Pasture", "PermanentCrop", "Residential", "River", "SeaLake",
]


def labeled(n_a, n_b):
    labels = np.array([0] * n_a + [1] * n_b, dtype=np.int64)
    return TaskDataset("a", "b", np.zeros((n_a + n_b, 1, 2, 2)), labels)


class TestSplit:
    def test_sizes(self):
        view = split(labeled(25, 25), 0.2, seed=0)
        assert view.sizes == (40, 10)

    def test_partition(self):
        view = split(labeled(30, 17), 0.3, seed=4)
        combined = np.concatenate([view.train_indices, view.val_indices])
        assert sorted(combined.tolist()) == list(range(47))

    def test_round_half_up(self):
        # 0.25 * 10 = 2.5 rounds to 3
        assert split(labeled(5, 5), 0.25, seed=0).sizes == (7, 3)

    def test_deterministic(self):
        a = split(labeled(20, 20), 0.2, seed=7)
        b = split(labeled(20, 20), 0.2, seed=7)
        np.testing.assert_array_equal(a.val_indices, b.val_indices)
        np.testing.assert_array_equal(a.train_indices, b.train_indices)

    def test_defaults_to_dataset_split_seed(self):
        data = labeled(20, 20)
        data.split_seed = 5
        np.testing.assert_array_equal(split(data, 0.2).val_indices, split(data, 0.2, seed=5).val_indices)
        np.testing.assert_array_equal(split(data, 0.2, seed=0).val_indices, split(labeled(20, 20), 0.2).val_indices)

    def test_seed_changes_split(self):
        a = split(labeled(20, 20), 0.2, seed=1)
        b = split(labeled(20, 20), 0.2, seed=2)
        assert not np.array_equal(a.val_indices, b.val_indices)

    def test_stratified_quotas(self):
        data = labeled(30, 20)
        view = split(data, 0.2, seed=3, stratify=True)
        val_labels = data.labels[view.val_indices]
        assert (val_labels == 0).sum() == 6
        assert (val_labels == 1).sum() == 4
        assert view.sizes == (40, 10)

    @pytest.mark.parametrize("fraction", [0.0, 1.0, -0.1, 1.5])
    def test_fraction_out_of_range(self, fraction):
        with pytest.raises(SplitError):
            split(labeled(5, 5), fraction)

    def test_empty_side(self):
        with pytest.raises(SplitError):
            split(labeled(2, 2), 0.1)
        with pytest.raises(SplitError):
            split(labeled(2, 2), 0.95)


class TestTaskMatrix:
    def test_eurosat_has_45_pairs(self):
        pairs = task_matrix(class_names=EUROSAT_CLASSES)
        assert len(pairs) == 45
        assert pairs == sorted(pairs)
        assert all(a < b for a, b in pairs)

    def test_from_root(self, eurosat_root):
        assert task_matrix(eurosat_root) == [
            ("Forest", "Industrial"),
            ("Forest", "River"),
            ("Industrial", "River"),
        ]

    def test_duplicates_collapse(self):
        assert task_matrix(class_names=["b", "a", "b"]) == [("a", "b")]

    def test_needs_two_classes(self):
        with pytest.raises(DatasetError):
            task_matrix(class_names=["only"])

    def test_needs_a_source(self):
        with pytest.raises(DatasetError):
            task_matrix()
