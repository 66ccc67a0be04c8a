import numpy as np

from qdrbench.data import load_csv
from qdrbench.synth import (
    FRAUD_LIKE,
    UCI_LIKE,
    fraud_like,
    make_surrogate,
    separable_blobs,
    uci_like,
    write_surrogate_csv,
)


class TestSurrogates:
    def test_shapes_and_labels(self):
        table = uci_like(seed=0)
        assert table.features.shape == (UCI_LIKE.n_rows, UCI_LIKE.n_features)
        assert set(np.unique(table.labels)) == {0, 1}

    def test_deterministic(self):
        a = fraud_like(seed=3)
        b = fraud_like(seed=3)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_seed_changes_data(self):
        assert not np.array_equal(uci_like(seed=0).features,
                                  uci_like(seed=1).features)

    def test_positive_fraction(self):
        table = uci_like(seed=0)
        frac = table.labels.mean()
        assert abs(frac - UCI_LIKE.pos_fraction) < 0.05

    def test_signal_columns_shifted_for_positives(self):
        table = make_surrogate(UCI_LIKE, seed=7)
        y = table.labels
        for c in UCI_LIKE.signal_columns:
            col = table.features[:, c]
            assert col[y == 1].mean() - col[y == 0].mean() > 0.8

    def test_noise_columns_have_raw_units(self):
        table = make_surrogate(FRAUD_LIKE, seed=2)
        noise = [c for c in range(FRAUD_LIKE.n_features)
                 if c not in FRAUD_LIKE.signal_columns]
        stds = table.features[:, noise].std(axis=0)
        assert stds.max() > 100.0  # far from unit scale
        assert stds.max() / stds.min() > 10.0  # heterogeneous scales

    def test_resize(self):
        table = uci_like(seed=0, n_rows=250)
        assert table.features.shape[0] == 250

    def test_csv_roundtrip(self, tmp_path):
        table = uci_like(seed=1, n_rows=60)
        path = tmp_path / "surrogate.csv"
        write_surrogate_csv(path, table)
        loaded = load_csv(path, "target")
        assert np.allclose(loaded.features, table.features)
        assert np.array_equal(loaded.labels, table.labels)


class TestBlobs:
    def test_balanced_and_separable(self):
        x, y = separable_blobs(100, seed=0)
        assert y.sum() == 50
        # the default gap leaves the clusters linearly separable on x0 + x1
        proj = x @ np.ones(2)
        assert proj[y == 1].min() > proj[y == 0].max()

    def test_deterministic(self):
        a = separable_blobs(40, seed=5)
        b = separable_blobs(40, seed=5)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
