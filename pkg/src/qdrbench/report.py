"""Result emission: long-format CSV, paper-style text tables, run manifest,
and grouped-bar plot data with a round-trippable parser."""

import csv
import os
from dataclasses import asdict

from .metrics import METRIC_NAMES

MODEL_LABELS = {
    "lr": "LR",
    "knn": "KNN",
    "cart": "CART",
    "nb": "NB",
    "svm": "SVM",
    "qsvc": "QSVC",
    "vqc": "VQA",
}
METRIC_LABELS = {
    "precision": "Precision (%)",
    "recall": "Recall (%)",
    "f1": "f1-score (%)",
    "mcc": "MCC (%)",
    "balanced_accuracy": "BA (%)",
}


def write_results_csv(reports, path):
    """Long format: dataset, reducer, model, metric, mean, std, seed."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["dataset", "reducer", "model", "metric", "mean", "std", "seed"]
        )
        for rep in sorted(
            reports, key=lambda r: (r.extra.get("dataset", ""), r.reducer, r.model)
        ):
            for name in METRIC_NAMES:
                writer.writerow(
                    [
                        rep.extra.get("dataset", ""),
                        rep.reducer,
                        rep.model,
                        name,
                        repr(rep.mean[name]),
                        repr(rep.std[name]),
                        rep.seed,
                    ]
                )


def read_results_csv(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            rec["mean"] = float(rec["mean"])
            rec["std"] = float(rec["std"])
            rec["seed"] = int(rec["seed"])
            rows.append(rec)
    return rows


def write_table_txt(reports, path, title=""):
    """One aligned text table, one model row and one metric column."""
    header = ["model"] + [METRIC_LABELS[m] for m in METRIC_NAMES]
    lines = [title] if title else []
    rows = [header]
    for rep in reports:
        label = MODEL_LABELS.get(rep.model, rep.model)
        if rep.reducer and rep.reducer != "none":
            label = f"{label} ({rep.reducer})"
        rows.append([label] + [rep.formatted(m) for m in METRIC_NAMES])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(manifests, path):
    lines = []
    for man in manifests:
        cfg = asdict(man.config)
        lines.append(f"[run dataset={cfg['dataset']} reducer={cfg['reducer']}]")
        lines.append(f"version {man.version}")
        for key in sorted(cfg):
            lines.append(f"config.{key} = {cfg[key]}")
        for key in sorted(man.fingerprint):
            lines.append(f"data.{key} = {man.fingerprint[key]}")
        for model in sorted(man.timings):
            lines.append(f"seconds.{model} = {man.timings[model]}")
        for model, hashes in sorted(man.fit_hashes.items()):
            lines.append(f"fit_index_hashes.{model} = {','.join(hashes)}")
        for model, err in sorted(man.failures.items()):
            lines.append(f"FAILED.{model} = {err}")
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def emit_plotdata(reports, path):
    """Grouped-bar data: one row per model x reducer, one column per metric."""
    if not reports:
        raise ValueError("no reports to plot")
    lines = ["group\t" + "\t".join(METRIC_NAMES)]
    for rep in sorted(
        reports, key=lambda r: (r.extra.get("dataset", ""), r.reducer, r.model)
    ):
        group = f"{MODEL_LABELS.get(rep.model, rep.model)}({rep.reducer})"
        ds = rep.extra.get("dataset", "")
        if ds:
            group = f"{ds}:{group}"
        vals = "\t".join(repr(rep.mean[m]) for m in METRIC_NAMES)
        lines.append(f"{group}\t{vals}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_plotdata(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split("\t")[1:]
    out = {}
    for line in lines[1:]:
        parts = line.split("\t")
        out[parts[0]] = dict(zip(header, (float(v) for v in parts[1:])))
    return out


def write_run_outputs(manifests, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    os.makedirs(os.path.join(out_dir, "tables"), exist_ok=True)
    all_reports = [rep for man in manifests for rep in man.reports]
    write_results_csv(all_reports, os.path.join(out_dir, "results.csv"))
    for man in manifests:
        if not man.reports:
            continue
        name = f"{man.config.dataset}_{man.config.reducer}.txt"
        title = (
            f"dataset={man.config.dataset} reducer={man.config.reducer} "
            f"seed={man.config.seed}"
        )
        write_table_txt(
            man.reports, os.path.join(out_dir, "tables", name), title=title
        )
    write_manifest(manifests, os.path.join(out_dir, "manifest.txt"))
