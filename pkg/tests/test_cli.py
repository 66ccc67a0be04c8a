import numpy as np
import pytest

from qdrbench import report
from qdrbench.cli import _parse_bool, build_config, main, read_config
from qdrbench.metrics import ConfusionCounts, aggregate, metrics
from qdrbench.pipeline import ConfigError
from qdrbench.synth import uci_like, write_surrogate_csv


@pytest.fixture(scope="module")
def csv_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "table.csv"
    write_surrogate_csv(path, uci_like(seed=0, n_rows=400))
    return str(path)


FAST_ARGS = [
    "--models", "nb,cart",
    "--n-train", "120", "--n-test", "40", "--folds", "4",
]


class TestConfigFile:
    def test_read_key_values(self, tmp_path):
        path = tmp_path / "bench.cfg"
        path.write_text("seed = 3  # comment\n\nreducer = pca\n")
        assert read_config(path) == {"seed": "3", "reducer": "pca"}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bench.cfg"
        path.write_text("just words\n")
        with pytest.raises(ConfigError):
            read_config(path)

    def test_parse_bool(self):
        assert _parse_bool("Yes") and not _parse_bool("off")
        with pytest.raises(ConfigError):
            _parse_bool("maybe")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            build_config({"learning_rate": "1"}, _args())

    def test_flags_override_file(self):
        cfg = build_config({"seed": "1", "folds": "3"}, _args(seed=9))
        assert cfg.seed == 9 and cfg.folds == 3


def _args(**over):
    class Args:
        dataset = None
        csv = None
        target = None
        drop = None
        reducer = None
        models = None
        seed = None
        out = None
        folds = None
        n_train = None
        n_test = None
        vqc_epochs = None

    args = Args()
    for key, val in over.items():
        setattr(args, key, val)
    return args


class TestExitCodes:
    def test_run_success(self, csv_path, tmp_path, capsys):
        code = main([
            "run", "--csv", csv_path, "--reducer", "pca",
            "--out", str(tmp_path / "out"), *FAST_ARGS,
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "custom/pca nb:" in out
        assert (tmp_path / "out" / "results.csv").exists()
        assert (tmp_path / "out" / "manifest.txt").exists()
        assert (tmp_path / "out" / "tables" / "custom_pca.txt").exists()

    def test_config_error_is_1(self, csv_path, tmp_path):
        code = main([
            "run", "--csv", csv_path, "--models", "rf",
            "--out", str(tmp_path / "out"),
        ])
        assert code == 1

    def test_data_error_is_2(self, tmp_path):
        code = main([
            "run", "--csv", str(tmp_path / "missing.csv"),
            "--out", str(tmp_path / "out"),
        ])
        assert code == 2

    def test_too_few_rows_is_2(self, csv_path, tmp_path):
        code = main([
            "run", "--csv", csv_path, "--n-train", "800", "--n-test", "200",
            "--models", "nb", "--out", str(tmp_path / "out"),
        ])
        assert code == 2

    def test_bad_config_file_value_is_1(self, csv_path, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("stratified = maybe\n")
        code = main([
            "run", "--config", str(cfg), "--csv", csv_path,
            "--out", str(tmp_path / "out"),
        ])
        assert code == 1


class TestSweep:
    def test_sweep_two_reducers(self, csv_path, tmp_path):
        out = tmp_path / "out"
        code = main([
            "sweep", "--datasets", f"custom:{csv_path}:target",
            "--reducers", "pca,lda_split", "--out", str(out), *FAST_ARGS,
        ])
        assert code == 0
        rows = report.read_results_csv(out / "results.csv")
        assert {r["reducer"] for r in rows} == {"pca", "lda_split"}
        assert (out / "tables" / "custom_pca.txt").exists()
        assert (out / "tables" / "custom_lda_split.txt").exists()

    def test_sweep_without_datasets_is_1(self, tmp_path):
        code = main(["sweep", "--out", str(tmp_path / "out")])
        assert code == 1

    def test_sweep_byte_identical_reruns(self, csv_path, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main([
                "sweep", "--datasets", f"custom:{csv_path}:target",
                "--reducers", "pca", "--out", str(out), *FAST_ARGS,
            ]) == 0
            outs.append((out / "results.csv").read_bytes())
        assert outs[0] == outs[1]


class TestPlotdata:
    def test_roundtrip(self, csv_path, tmp_path):
        out = tmp_path / "out"
        assert main([
            "run", "--csv", csv_path, "--reducer", "pca",
            "--out", str(out), *FAST_ARGS,
        ]) == 0
        plot = tmp_path / "plot.tsv"
        assert main([
            "plotdata", "--results", str(out / "results.csv"),
            "--out", str(plot),
        ]) == 0
        parsed = report.parse_plotdata(plot)
        rows = report.read_results_csv(out / "results.csv")
        for row in rows:
            group = f"custom:{report.MODEL_LABELS[row['model']]}(pca)"
            assert parsed[group][row["metric"]] == row["mean"]

    def test_missing_results_is_2(self, tmp_path):
        code = main([
            "plotdata", "--results", str(tmp_path / "nope.csv"),
            "--out", str(tmp_path / "plot.tsv"),
        ])
        assert code == 2


class TestReportFormats:
    def _reports(self):
        rep = aggregate(
            [metrics(ConfusionCounts(tp=4, fp=1, tn=3, fn=2))],
            model="nb", reducer="pca", seed=0,
        )
        rep.extra["dataset"] = "custom"
        return [rep]

    def test_results_csv_roundtrip(self, tmp_path):
        path = tmp_path / "results.csv"
        reports = self._reports()
        report.write_results_csv(reports, path)
        rows = report.read_results_csv(path)
        by_metric = {r["metric"]: r for r in rows}
        assert by_metric["precision"]["mean"] == reports[0].mean["precision"]
        assert by_metric["f1"]["seed"] == 0

    def test_table_layout(self, tmp_path):
        path = tmp_path / "table.txt"
        report.write_table_txt(self._reports(), path, title="t")
        lines = path.read_text().splitlines()
        assert lines[0] == "t"
        assert lines[1].startswith("model")
        assert "NB (pca)" in lines[2]

    def test_empty_plotdata_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            report.emit_plotdata([], tmp_path / "plot.tsv")
