"""Benchmark orchestration: load -> clean -> reduce -> encode -> model ->
evaluate, with per-fold refitting of every preprocessing step (no leakage).

Classical models are scored with k-fold cross-validation on the training
subsample; the VQC is scored once on the held-out test part of the split
(mirroring how the variational model is reported without an error bar),
unless ``cv_all`` is set.
"""

import hashlib
import time
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import classical, dimred, quantum
from .data import (
    DataError,
    DataTable,
    fit_standardizer,
    kfold,
    load_csv,
    subsample,
)
from .metrics import aggregate, confusion, metrics

ALL_MODELS = ("lr", "knn", "cart", "nb", "svm", "qsvc", "vqc")
QUANTUM_MODELS = frozenset({"qsvc", "vqc"})
ALL_REDUCERS = ("svd", "pca", "skpp", "lda_split")
DATASET_DEFAULTS = {
    "uci_credit": {"target": "default.payment.next.month", "drop": ("ID",)},
    "bank_fraud": {"target": "targets", "drop": ()},
    "custom": {"target": "target", "drop": ()},
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dataset: str = "custom"
    csv_path: str = ""
    target_column: str = ""
    drop_columns: tuple = ()
    reducer: str = "pca"  # svd | pca | skpp | lda_split | none
    models: tuple = ALL_MODELS
    n_train: int = 800
    n_test: int = 200
    n_qubits: int = 2
    folds: int = 10
    seed: int = 0
    featuremap: str = "zz"
    reps: int = 2
    vqc_layers: int = 4
    vqc_epochs: int = 150
    vqc_lr: float = 0.3
    svm_c: float = 1.0
    knn_k: int = 7
    lr_max_iter: int = 1000
    skpp_restarts: int = 6
    stratified: bool = True
    cv_all: bool = False
    out_dir: str = "results"

    def validate(self):
        if self.dataset not in DATASET_DEFAULTS:
            raise ConfigError(f"unknown dataset {self.dataset!r}")
        if self.reducer not in ALL_REDUCERS + ("none",):
            raise ConfigError(f"unknown reducer {self.reducer!r}")
        for m in self.models:
            if m not in ALL_MODELS:
                raise ConfigError(f"unknown model {m!r}")
        if self.featuremap not in ("angle", "zz"):
            raise ConfigError(f"unknown feature map {self.featuremap!r}")
        if self.n_train < 1 or self.n_test < 0:
            raise ConfigError("n_train/n_test out of range")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")

    def resolved_target(self):
        return self.target_column or DATASET_DEFAULTS[self.dataset]["target"]

    def resolved_drop(self):
        return tuple(self.drop_columns) or tuple(
            DATASET_DEFAULTS[self.dataset]["drop"]
        )


@dataclass
class RunManifest:
    config: RunConfig
    reports: list  # EvalReport per model
    timings: dict  # model -> seconds
    fingerprint: dict
    fit_hashes: dict  # model -> list of per-fold train-index hashes
    failures: dict = field(default_factory=dict)
    version: str = ""


def derived_seed(*parts):
    """Stable 32-bit seed from heterogeneous parts."""
    return zlib.crc32(":".join(str(p) for p in parts).encode())


def _index_hash(indices):
    payload = ",".join(str(i) for i in sorted(int(v) for v in indices))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def check_quantum_dims(cfg, n_features):
    wants_quantum = any(m in QUANTUM_MODELS for m in cfg.models)
    if not wants_quantum:
        return
    if cfg.reducer == "none":
        if n_features != cfg.n_qubits:
            raise ConfigError(
                "quantum models with reducer 'none' need "
                f"n_features == n_qubits ({n_features} != {cfg.n_qubits})"
            )
    # every reducer in the benchmark path emits n_qubits components


def fit_reducer(name, features, labels, cfg, seed):
    table = DataTable(features=features, labels=labels, feature_names=[])
    if name == "svd":
        return dimred.fit_svd(table, cfg.n_qubits)
    if name == "pca":
        return dimred.fit_pca(table, cfg.n_qubits)
    if name == "skpp":
        return dimred.fit_skpp(
            table, cfg.n_qubits, restarts=cfg.skpp_restarts, seed=seed
        )
    if name == "lda_split":
        return dimred.fit_lda_split(table, seed=seed)
    raise ConfigError(f"unknown reducer {name!r}")


def _prepare_fold(x_train, y_train, x_test, cfg, model_name, seed):
    # Normalization is part of the reduction step (the workflow normalizes to
    # get "a good format" for the reducers); the full-feature baseline path
    # feeds the table to the models as-is.
    if cfg.reducer == "none":
        xtr, xte = x_train, x_test
    else:
        scaler = fit_standardizer(x_train)
        xtr = scaler.apply(x_train)
        xte = scaler.apply(x_test)
        reducer = fit_reducer(cfg.reducer, xtr, y_train, cfg, seed)
        xtr = dimred.transform(reducer, xtr)
        xte = dimred.transform(reducer, xte)
    if model_name in QUANTUM_MODELS:
        angle_scaler = quantum.fit_angle_scaler(xtr)
        xtr = angle_scaler.apply(xtr)
        xte = angle_scaler.apply(xte)
    return xtr, xte


def _train_predict(model_name, xtr, ytr, xte, cfg, seed):
    if model_name == "lr":
        model = classical.train_logistic(xtr, ytr, max_iter=cfg.lr_max_iter)
    elif model_name == "knn":
        model = classical.train_knn(xtr, ytr, k=cfg.knn_k)
    elif model_name == "cart":
        model = classical.train_cart(xtr, ytr)
    elif model_name == "nb":
        model = classical.train_nb(xtr, ytr)
    elif model_name == "svm":
        model = classical.train_svm(xtr, ytr, c=cfg.svm_c, kernel="rbf")
    elif model_name == "qsvc":
        spec = quantum.FeatureMapSpec(
            kind=cfg.featuremap, n_qubits=xtr.shape[1], reps=cfg.reps
        )
        model = quantum.train_qsvc(xtr, ytr, spec, c=cfg.svm_c)
    elif model_name == "vqc":
        model = quantum.train_vqc(
            xtr, ytr,
            n_layers=cfg.vqc_layers,
            epochs=cfg.vqc_epochs,
            lr=cfg.vqc_lr,
            seed=seed,
        )
    else:
        raise ConfigError(f"unknown model {model_name!r}")
    return model.predict(xte)


def evaluate_fold(table, train_idx, test_idx, model_name, cfg, seed):
    x_train = table.features[train_idx]
    y_train = table.labels[train_idx]
    x_test = table.features[test_idx]
    y_test = table.labels[test_idx]
    xtr, xte = _prepare_fold(x_train, y_train, x_test, cfg, model_name, seed)
    y_pred = _train_predict(model_name, xtr, y_train, xte, cfg, seed)
    return metrics(confusion(y_test, y_pred))


def evaluate_model(table, split, model_name, cfg):
    """EvalReport for one model on one dataset split.

    Returns (report, fit_index_hashes).
    """
    single_split = model_name == "vqc" and not cfg.cv_all
    hashes = []
    per_fold = []
    if single_split:
        seed = derived_seed(cfg.seed, cfg.dataset, cfg.reducer, model_name)
        per_fold.append(
            evaluate_fold(
                table, split.train_indices, split.test_indices,
                model_name, cfg, seed,
            )
        )
        hashes.append(_index_hash(split.train_indices))
    else:
        plan = kfold(len(split.train_indices), cfg.folds,
                     derived_seed(cfg.seed, cfg.dataset, "folds"))
        for f, (tr, te) in enumerate(plan.folds):
            seed = derived_seed(cfg.seed, cfg.dataset, cfg.reducer, model_name, f)
            tr_idx = split.train_indices[tr]
            te_idx = split.train_indices[te]
            per_fold.append(
                evaluate_fold(table, tr_idx, te_idx, model_name, cfg, seed)
            )
            hashes.append(_index_hash(tr_idx))
    report = aggregate(
        per_fold, model=model_name, reducer=cfg.reducer, seed=cfg.seed
    )
    report.extra["dataset"] = cfg.dataset
    report.extra["single_split"] = single_split
    return report, hashes


def load_dataset(cfg):
    if not cfg.csv_path:
        raise ConfigError("no CSV path configured")
    return load_csv(cfg.csv_path, cfg.resolved_target(), cfg.resolved_drop())


def fingerprint(table):
    return {
        "rows": table.n_samples,
        "cols": table.n_features,
        "positive_fraction": round(float(np.mean(table.labels == 1)), 6),
        "dropped_rows": table.n_dropped,
    }


def run_benchmark(cfg, table=None):
    """Execute the workflow for one (dataset, reducer) configuration."""
    from . import __version__

    cfg.validate()
    if table is None:
        table = load_dataset(cfg)
    check_quantum_dims(cfg, table.n_features)
    if cfg.n_train + cfg.n_test > table.n_samples:
        raise DataError(
            f"table has {table.n_samples} rows; cannot draw "
            f"{cfg.n_train}+{cfg.n_test}"
        )
    split = subsample(
        table, cfg.n_train, cfg.n_test,
        derived_seed(cfg.seed, cfg.dataset, "split"),
        stratified=cfg.stratified,
    )
    reports = []
    timings = {}
    fit_hashes = {}
    failures = {}
    for model_name in cfg.models:
        started = time.perf_counter()
        try:
            report, hashes = evaluate_model(table, split, model_name, cfg)
            reports.append(report)
            fit_hashes[model_name] = hashes
        except (ValueError, ArithmeticError) as exc:
            failures[model_name] = f"{type(exc).__name__}: {exc}"
        timings[model_name] = round(time.perf_counter() - started, 3)
    return RunManifest(
        config=cfg,
        reports=reports,
        timings=timings,
        fingerprint=fingerprint(table),
        fit_hashes=fit_hashes,
        failures=failures,
        version=__version__,
    )


def run_matrix(configs):
    """Run a list of configurations, isolating per-config failures."""
    manifests = []
    tables = {}
    for cfg in configs:
        try:
            key = (cfg.dataset, cfg.csv_path)
            if key not in tables:
                cfg.validate()
                tables[key] = load_dataset(cfg)
            manifests.append(run_benchmark(cfg, table=tables[key]))
        except (ValueError, ArithmeticError, OSError) as exc:
            manifests.append(
                RunManifest(
                    config=cfg,
                    reports=[],
                    timings={},
                    fingerprint={},
                    fit_hashes={},
                    failures={"__config__": f"{type(exc).__name__}: {exc}"},
                )
            )
    return manifests


def sweep_configs(base, datasets, reducers=ALL_REDUCERS, models=ALL_MODELS):
    """Cartesian (dataset x reducer) configs sharing one base configuration."""
    configs = []
    for entry in datasets:
        name, path = entry[0], entry[1]
        target = entry[2] if len(entry) > 2 else ""
        for reducer in reducers:
            configs.append(
                replace(
                    base,
                    dataset=name,
                    csv_path=path,
                    target_column=target or base.target_column,
                    reducer=reducer,
                    models=tuple(models),
                )
            )
    return configs
