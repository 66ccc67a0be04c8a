"""`bench` command line: run one benchmark, sweep reducers x models, or emit
plot data from a results file.

Exit codes: 0 success, 1 config error, 2 data error, 3 runtime failure.
"""

import argparse
import sys
from dataclasses import replace

from . import report
from .data import DataError
from .pipeline import (
    ALL_MODELS,
    ALL_REDUCERS,
    ConfigError,
    RunConfig,
    run_benchmark,
    run_matrix,
    sweep_configs,
)

INT_KEYS = {
    "n_train", "n_test", "n_qubits", "folds", "seed", "reps",
    "vqc_layers", "vqc_epochs", "knn_k", "lr_max_iter", "skpp_restarts",
}
FLOAT_KEYS = {"vqc_lr", "svm_c"}
BOOL_KEYS = {"stratified", "cv_all"}


def read_config(path):
    """Plain key = value file; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return values


def _parse_bool(val):
    if val.lower() in ("1", "true", "yes", "on"):
        return True
    if val.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {val!r}")


def build_config(file_values, args):
    """Merge config-file values with CLI flags; flags win."""
    cfg = RunConfig()
    merged = dict(file_values)
    flag_map = {
        "dataset": args.dataset,
        "csv": args.csv,
        "target": args.target,
        "drop": args.drop,
        "reducer": getattr(args, "reducer", None),
        "models": args.models,
        "seed": args.seed,
        "out": args.out,
        "folds": args.folds,
        "n_train": args.n_train,
        "n_test": args.n_test,
        "vqc_epochs": args.vqc_epochs,
    }
    for key, val in flag_map.items():
        if val is not None:
            merged[key] = str(val)

    renames = {"csv": "csv_path", "target": "target_column", "out": "out_dir"}
    updates = {}
    for key, val in merged.items():
        if key in ("datasets", "reducers"):
            continue  # sweep-only keys, handled by the caller
        name = renames.get(key, key)
        if name == "drop_columns" or key == "drop":
            updates["drop_columns"] = tuple(
                v.strip() for v in val.split(",") if v.strip()
            )
            continue
        if name == "models":
            updates["models"] = tuple(
                v.strip() for v in val.split(",") if v.strip()
            )
            continue
        if not hasattr(cfg, name):
            raise ConfigError(f"unknown config key {key!r}")
        if name in INT_KEYS:
            updates[name] = int(val)
        elif name in FLOAT_KEYS:
            updates[name] = float(val)
        elif name in BOOL_KEYS:
            updates[name] = _parse_bool(val) if isinstance(val, str) else val
        else:
            updates[name] = val
    return replace(cfg, **updates)


def _parse_datasets(merged, args):
    spec = None
    if args.datasets is not None:
        spec = args.datasets
    elif "datasets" in merged:
        spec = merged["datasets"]
    if spec:
        out = []
        for item in spec.split(","):
            parts = item.strip().split(":")
            if len(parts) < 2:
                raise ConfigError(
                    f"dataset entry {item!r} must be name:path[:target]"
                )
            out.append(tuple(parts[:3]))
        return out
    # fall back to the single-dataset keys
    dataset = merged.get("dataset", args.dataset or "custom")
    csv_path = args.csv or merged.get("csv", "")
    if not csv_path:
        raise ConfigError("sweep needs 'datasets' or a csv path")
    target = args.target or merged.get("target", "")
    return [(dataset, csv_path, target)]


def cmd_run(args):
    file_values = read_config(args.config) if args.config else {}
    cfg = build_config(file_values, args)
    manifest = run_benchmark(cfg)
    report.write_run_outputs([manifest], cfg.out_dir)
    _print_summary([manifest])
    if manifest.failures:
        return 3
    return 0


def cmd_sweep(args):
    file_values = read_config(args.config) if args.config else {}
    base = build_config(file_values, args)
    datasets = _parse_datasets(file_values, args)
    reducers = ALL_REDUCERS
    reducers_spec = args.reducers or file_values.get("reducers")
    if reducers_spec:
        reducers = tuple(v.strip() for v in reducers_spec.split(","))
    configs = sweep_configs(base, datasets, reducers=reducers, models=base.models)
    manifests = run_matrix(configs)
    report.write_run_outputs(manifests, base.out_dir)
    _print_summary(manifests)
    if any(man.failures for man in manifests):
        return 3
    return 0


def cmd_plotdata(args):
    rows = report.read_results_csv(args.results)
    if not rows:
        raise DataError(f"no rows in {args.results}")
    # regroup long-format rows back into pseudo-reports for emission
    from .metrics import EvalReport

    grouped = {}
    for row in rows:
        key = (row["dataset"], row["reducer"], row["model"], row["seed"])
        grouped.setdefault(key, {})[row["metric"]] = (row["mean"], row["std"])
    reports = []
    for (dataset, reducer, model, seed), vals in sorted(grouped.items()):
        reports.append(
            EvalReport(
                folds=[],
                mean={m: v[0] for m, v in vals.items()},
                std={m: v[1] for m, v in vals.items()},
                model=model,
                reducer=reducer,
                seed=seed,
                extra={"dataset": dataset},
            )
        )
    report.emit_plotdata(reports, args.out)
    print(f"wrote {args.out}")
    return 0


def _print_summary(manifests):
    for man in manifests:
        tag = f"{man.config.dataset}/{man.config.reducer}"
        for rep in man.reports:
            print(
                f"{tag} {rep.model}: "
                + " ".join(
                    f"{m}={rep.formatted(m)}" for m in ("balanced_accuracy", "f1")
                )
            )
        for model, err in man.failures.items():
            print(f"{tag} {model}: FAILED ({err})", file=sys.stderr)


def _add_shared(parser):
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--dataset", choices=("uci_credit", "bank_fraud", "custom"))
    parser.add_argument("--csv", help="path to the dataset CSV")
    parser.add_argument("--target", help="target column name")
    parser.add_argument("--drop", help="comma-separated columns to drop")
    parser.add_argument("--models", help=f"comma list from {','.join(ALL_MODELS)}")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--folds", type=int)
    parser.add_argument("--n-train", dest="n_train", type=int)
    parser.add_argument("--n-test", dest="n_test", type=int)
    parser.add_argument("--vqc-epochs", dest="vqc_epochs", type=int)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="bench",
        description="dimensionality-reduction x classifier benchmark runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one dataset x reducer configuration")
    _add_shared(p_run)
    p_run.add_argument("--reducer", choices=ALL_REDUCERS + ("none",))
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the reducer x model matrix")
    _add_shared(p_sweep)
    p_sweep.add_argument("--datasets", help="name:path[:target],...")
    p_sweep.add_argument("--reducers", help="comma list of reducers")
    p_sweep.set_defaults(func=cmd_sweep)

    p_plot = sub.add_parser("plotdata", help="emit grouped-bar plot data")
    p_plot.add_argument("--results", required=True, help="results.csv path")
    p_plot.add_argument("--out", required=True, help="output text file")
    p_plot.set_defaults(func=cmd_plotdata)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
