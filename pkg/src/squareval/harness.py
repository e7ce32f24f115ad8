"""Config-driven experiment runner: trains or loads a scoring model,
evaluates techniques on datasets, and emits reports.

A technique names an encoding variant plus a polarity restriction on
the reference pools (restriction applies to the pools before budget
selection, so a single-polarity technique still spends its full
reference budget):

    SQUARE      full encoding, both polarities
    QT          question + target only
    TR          target + one reference, no question
    TQR         question + target + one reference
    TQR_NEG     TQR restricted to negative references
    SQUARE_POS  SQUARE restricted to positive references

Trained heads are cached under a key derived from everything that
determines the weights: technique, selection policy, training
hyperparameters, backbone, and the training dataset's content
fingerprint. Output paths are deliberately not part of the key. A rerun
with an unchanged config loads the cached checkpoint and trains
nothing; the per-technique training log appears in the output directory
only when training actually ran, which is what tests assert on.

The cache directory is $SQUAREVAL_CACHE, else ~/.cache/squareval.

Reports are written as report.json (deterministic: keys sorted, floats
at full precision; generated_at is the only field that varies between
identical runs) plus report.txt (aligned table with columns Technique,
# Refs, Accuracy, AUROC, Correlation) and static score-histogram and
metric-bar plots. Any stage failure writes output_dir/failed/error.txt
naming the stage and cause.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import jsonschema

from .data import Dataset, dataset_fingerprint, load_jsonl
from .encoding import DEFAULT_MAX_UNITS
from .metrics import MetricError, MetricRow, ScoredSet, accuracy, auroc, pearson, relative_delta
from .scorer import get_backbone, load_checkpoint, save_checkpoint, score_batch
from .selection import (
    BOTH,
    NEGATIVE_ONLY,
    POSITIVE_ONLY,
    RANDOM_RANGE,
    SelectionPolicy,
    restrict_pools,
)
from .synthetic import make_synthetic_dataset
from .training import TrainConfig, encode_example, train, write_trainlog

REPORT_COLUMNS = ("Technique", "# Refs", "Accuracy", "AUROC", "Correlation")


class ConfigError(ValueError):
    """Experiment config missing, malformed, or schema-invalid."""


class AdapterError(ValueError):
    """External scorer unknown or returned an incomplete score map."""


class StageFailure(RuntimeError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: BaseException | str):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass(frozen=True)
class Technique:
    name: str
    variant: str
    restriction: str


TECHNIQUES = {
    "SQUARE": Technique("SQUARE", "SQUARE", BOTH),
    "QT": Technique("QT", "QT", BOTH),
    "TR": Technique("TR", "TR", BOTH),
    "TQR": Technique("TQR", "TQR", BOTH),
    "TQR_NEG": Technique("TQR_NEG", "TQR", NEGATIVE_ONLY),
    "SQUARE_POS": Technique("SQUARE_POS", "SQUARE", POSITIVE_ONLY),
}

# Table-4-shaped ablation: technique plus selection-policy overrides,
# in fixed row order
ABLATION_MATRIX = (
    ("TQR_NEG", {"mode": "fixed_k", "total_budget": 1}),
    ("SQUARE_POS", {"mode": "fixed_k", "total_budget": 5}),
    ("SQUARE", {"mode": "fixed_k", "total_budget": 3}),
    ("SQUARE", {"mode": RANDOM_RANGE, "range_low": 1, "range_high": 5}),
    ("SQUARE", {"mode": "fixed_k", "total_budget": 5}),
)


def n_refs_descriptor_for(technique: str, policy: SelectionPolicy) -> str:
    """Reference-count column value: structural for single/zero-ref
    variants, budget-derived for the multi-reference ones."""
    if technique == "QT":
        return "0"
    if technique in ("TR", "TQR", "TQR_NEG"):
        return "1"
    return policy.n_refs_descriptor()


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class ExperimentConfig:
    train_dataset: str
    eval_datasets: tuple[str, ...]
    technique: str
    output_dir: str
    baseline_technique: str | None = None
    backbone: str = "toy"
    selection_policy: SelectionPolicy = field(default_factory=SelectionPolicy)
    train_params: dict = field(default_factory=dict)
    external_adapters: tuple[str, ...] = ()
    retrain_per_eval_dataset: bool = False

    def __post_init__(self):
        object.__setattr__(self, "eval_datasets", tuple(self.eval_datasets))
        object.__setattr__(self, "external_adapters", tuple(self.external_adapters))
        if self.technique not in TECHNIQUES:
            raise ConfigError(f"unknown technique {self.technique!r}")
        if self.baseline_technique is not None and self.baseline_technique not in TECHNIQUES:
            raise ConfigError(f"unknown baseline technique {self.baseline_technique!r}")
        try:
            self.train_config_for(self.technique)
        except (TypeError, ValueError) as err:
            raise ConfigError(f"bad train_config: {err}") from err

    def train_config_for(self, technique: str) -> TrainConfig:
        return TrainConfig(
            encoding_variant=TECHNIQUES[technique].variant,
            selection_policy=self.selection_policy,
            **self.train_params,
        )

    def techniques_to_run(self) -> list[str]:
        run = [self.technique]
        if self.baseline_technique and self.baseline_technique != self.technique:
            run.append(self.baseline_technique)
        return run

    def canonical_dict(self) -> dict:
        """Everything that determines results; output_dir excluded."""
        return {
            "train_dataset": self.train_dataset,
            "eval_datasets": list(self.eval_datasets),
            "technique": self.technique,
            "baseline_technique": self.baseline_technique,
            "backbone": self.backbone,
            "train_config": self.train_config_for(self.technique).to_record(),
            "external_adapters": list(self.external_adapters),
            "retrain_per_eval_dataset": self.retrain_per_eval_dataset,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def _schema() -> dict:
    text = resources.files("squareval.schemas").joinpath("experiment.schema.json").read_text()
    return json.loads(text)


def config_from_dict(obj: dict) -> ExperimentConfig:
    try:
        jsonschema.validate(obj, _schema())
    except jsonschema.ValidationError as err:
        raise ConfigError(f"config does not match schema: {err.message}") from err
    try:
        policy = SelectionPolicy(**obj.get("selection_policy", {}))
    except ValueError as err:
        raise ConfigError(f"bad selection_policy: {err}") from err
    return ExperimentConfig(
        train_dataset=obj["train_dataset"],
        eval_datasets=tuple(obj["eval_datasets"]),
        technique=obj["technique"],
        output_dir=obj["output_dir"],
        baseline_technique=obj.get("baseline_technique"),
        backbone=obj.get("backbone", "toy"),
        selection_policy=policy,
        train_params=dict(obj.get("train_config", {})),
        external_adapters=tuple(obj.get("external_adapters", ())),
        retrain_per_eval_dataset=obj.get("retrain_per_eval_dataset", False),
    )


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"no such config file: {p}")
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError(f"{p}: not valid JSON: {err}") from err
    return config_from_dict(obj)


# ---------------------------------------------------------------- datasets


_SYNTHETIC_RE = re.compile(r"^synthetic(?::(\d+))?$")


def resolve_dataset(spec: str) -> Dataset:
    """Load a dataset spec: a JSONL path, or synthetic[:seed]."""
    m = _SYNTHETIC_RE.match(spec)
    if m is None:
        return load_jsonl(spec)
    if m.group(1) is None:
        return make_synthetic_dataset()
    return make_synthetic_dataset(seed=int(m.group(1)))


# ---------------------------------------------------------------- adapters


def _constant_half(ds: Dataset):
    return {ex.example_id: 0.5 for ex in ds.examples}


def _label_oracle(ds: Dataset):
    return {ex.example_id: float(ex.label) for ex in ds.examples}


EXTERNAL_ADAPTERS = {
    "constant-half": _constant_half,
    "label-oracle": _label_oracle,
}


def register_external_adapter(name: str, fn) -> None:
    """fn: Dataset -> mapping from example_id to score in [0, 1]."""
    EXTERNAL_ADAPTERS[name] = fn


def score_with_external(adapter_name: str, dataset: Dataset) -> ScoredSet:
    """Run a registered external scorer, aligned by example_id."""
    if adapter_name not in EXTERNAL_ADAPTERS:
        known = ", ".join(sorted(EXTERNAL_ADAPTERS))
        raise AdapterError(f"unknown adapter {adapter_name!r} (registered: {known})")
    mapping = EXTERNAL_ADAPTERS[adapter_name](dataset)
    missing = [ex.example_id for ex in dataset.examples if ex.example_id not in mapping]
    if missing:
        shown = ", ".join(missing[:20])
        more = f" (+{len(missing) - 20} more)" if len(missing) > 20 else ""
        raise AdapterError(f"adapter {adapter_name!r} missing scores for: {shown}{more}")
    return ScoredSet(
        scores=tuple(float(mapping[ex.example_id]) for ex in dataset.examples),
        labels=tuple(ex.label for ex in dataset.examples),
        example_ids=tuple(ex.example_id for ex in dataset.examples),
    )


# ---------------------------------------------------------------- caching


def cache_dir() -> Path:
    env = os.environ.get("SQUAREVAL_CACHE")
    return Path(env) if env else Path.home() / ".cache" / "squareval"


def checkpoint_cache_key(cfg: ExperimentConfig, technique: str, train_ds: Dataset) -> str:
    """Hash of everything that determines the trained head weights."""
    blob = json.dumps(
        {
            "technique": technique,
            "backbone": cfg.backbone,
            "train_config": cfg.train_config_for(technique).to_record(),
            "train_dataset_fingerprint": dataset_fingerprint(train_ds),
        },
        sort_keys=True,
    ).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def _restricted(examples, technique: str):
    keep = TECHNIQUES[technique].restriction
    return tuple(restrict_pools(ex, keep) for ex in examples)


def train_or_load(cfg: ExperimentConfig, technique: str, train_ds: Dataset, backbone):
    """Return (model, trained_this_run, cache_key, trainlog or None)."""
    key = checkpoint_cache_key(cfg, technique, train_ds)
    ckpt = cache_dir() / f"{key}.ckpt"
    if ckpt.is_file():
        return load_checkpoint(ckpt, expected_fingerprint=key), False, key, None
    train_cfg = cfg.train_config_for(technique)
    train_split = Dataset(train_ds.name, _restricted(train_ds.subset("train").examples, technique))
    dev_split = Dataset(train_ds.name, _restricted(train_ds.subset("dev").examples, technique))
    model, log = train(train_split, dev_split, train_cfg, backbone)
    model.config_fingerprint = key
    cache_dir().mkdir(parents=True, exist_ok=True)
    save_checkpoint(model, ckpt)
    write_trainlog(log, cache_dir() / f"{key}.trainlog.jsonl")
    return model, True, key, log


# ---------------------------------------------------------------- reports


@dataclass
class EvalReport:
    metadata: dict
    groups: list
    # per-group list of (row_label, scores, labels); feeds plots only
    plot_data: list = field(default_factory=list, repr=False, compare=False)

    def to_json_dict(self) -> dict:
        return {"metadata": self.metadata, "datasets": self.groups}


def _format_row(cells, widths):
    return "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()


def render_text(report: dict) -> str:
    """Aligned plain-text tables, one section per dataset."""
    lines = []
    meta = report["metadata"]
    lines.append(f"config hash: {meta['config_hash']}")
    lines.append(f"generated at: {meta['generated_at']}")
    lines.append(f"backbone: {meta['backbone']}")
    for group in report["datasets"]:
        lines.append("")
        lines.append(
            f"dataset: {group['dataset']} "
            f"({group['n_examples']} test examples, fingerprint {group['fingerprint'][:12]})"
        )
        has_deltas = any(row.get("deltas") for row in group["rows"])
        header = list(REPORT_COLUMNS)
        if has_deltas:
            header += ["Accuracy Δ%", "AUROC Δ%", "Correlation Δ%"]
        table = [header]
        for row in group["rows"]:
            if row.get("failed"):
                cells = [row["technique"], row["n_refs"], "FAILED", "FAILED", "FAILED"]
                if has_deltas:
                    cells += ["-", "-", "-"]
            else:
                corr = row["correlation"]
                cells = [
                    row["technique"],
                    row["n_refs"],
                    f"{row['accuracy']:.4f}",
                    f"{row['auroc']:.4f}",
                    f"{corr:.4f}" if corr is not None else "-",
                ]
                if has_deltas:
                    deltas = row.get("deltas") or {}
                    cells += [
                        f"{deltas[k]:+.2f}" if k in deltas else "-"
                        for k in ("accuracy", "auroc", "correlation")
                    ]
            table.append(cells)
        widths = [max(len(str(r[i])) for r in table) for i in range(len(header))]
        lines.extend(_format_row(r, widths) for r in table)
        for row in group["rows"]:
            if row.get("failed"):
                lines.append(f"  {row['technique']}: {row['error']}")
    return "\n".join(lines) + "\n"


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", label)


def _write_plots(report: EvalReport, out_dir: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for group, rows_data in zip(report.groups, report.plot_data):
        ds_tag = _safe_name(group["dataset"])
        for label, scores, labels in rows_data:
            fig, ax = plt.subplots(figsize=(5, 3))
            pos = [s for s, y in zip(scores, labels) if y == 1]
            neg = [s for s, y in zip(scores, labels) if y == 0]
            bins = [i / 20 for i in range(21)]
            ax.hist(neg, bins=bins, alpha=0.6, label="label 0")
            ax.hist(pos, bins=bins, alpha=0.6, label="label 1")
            ax.set_xlabel("score")
            ax.set_ylabel("count")
            ax.set_title(f"{group['dataset']}: {label}")
            ax.legend()
            fig.tight_layout()
            fig.savefig(out_dir / f"hist_{ds_tag}_{_safe_name(label)}.png", dpi=100)
            plt.close(fig)
        ok_rows = [r for r in group["rows"] if not r.get("failed")]
        if ok_rows:
            fig, ax = plt.subplots(figsize=(6, 3))
            names = [f"{r['technique']}@{r['n_refs']}" for r in ok_rows]
            x = range(len(ok_rows))
            width = 0.27
            for offset, metric in zip((-width, 0.0, width), ("accuracy", "auroc", "correlation")):
                heights = [r[metric] if r[metric] is not None else float("nan") for r in ok_rows]
                ax.bar([i + offset for i in x], heights, width, label=metric)
            ax.set_xticks(list(x))
            ax.set_xticklabels(names, rotation=20, ha="right", fontsize=7)
            negative = any(r["correlation"] is not None and r["correlation"] < 0 for r in ok_rows)
            ax.set_ylim(-1.0 if negative else 0.0, 1.05)
            ax.legend(fontsize=7)
            ax.set_title(group["dataset"])
            fig.tight_layout()
            fig.savefig(out_dir / f"bars_{ds_tag}.png", dpi=100)
            plt.close(fig)


def write_report(report: EvalReport, output_dir) -> None:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = report.to_json_dict()
    (out / "report.json").write_text(
        json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (out / "report.txt").write_text(render_text(doc), encoding="utf-8")
    _write_plots(report, out)


def _mark_failure(output_dir, failure: StageFailure) -> None:
    marker = Path(output_dir) / "failed"
    marker.mkdir(parents=True, exist_ok=True)
    (marker / "error.txt").write_text(f"stage: {failure.stage}\n{failure.cause}\n", encoding="utf-8")


# ---------------------------------------------------------------- running


def score_technique(cfg: ExperimentConfig, technique: str, model, test_examples) -> ScoredSet:
    tech = TECHNIQUES[technique]
    restricted = _restricted(test_examples, technique)
    encoded = [
        encode_example(
            ex,
            tech.variant,
            cfg.selection_policy,
            cfg.train_params.get("max_units", DEFAULT_MAX_UNITS),
        )
        for ex in restricted
    ]
    scores = score_batch(model, encoded)
    return ScoredSet(
        scores=tuple(scores),
        labels=tuple(ex.label for ex in test_examples),
        example_ids=tuple(ex.example_id for ex in test_examples),
    )


def _metric_row(technique: str, descriptor: str, scored: ScoredSet) -> dict:
    """Row record for the report. A degenerate scorer (constant output)
    has no defined correlation; that is reported as null, not an abort."""
    acc = accuracy(scored)
    auc = auroc(scored)
    try:
        corr = pearson(scored)
    except MetricError:
        return {
            "technique": technique,
            "n_refs": descriptor,
            "accuracy": acc,
            "auroc": auc,
            "correlation": None,
        }
    return MetricRow(
        technique=technique,
        n_refs_descriptor=descriptor,
        accuracy=acc,
        auroc=auc,
        correlation=corr,
    ).to_record()


def _attach_deltas(rows: list[dict], baseline_technique: str | None) -> None:
    if not baseline_technique:
        return
    base = next(
        (r for r in rows if r["technique"] == baseline_technique and not r.get("failed")), None
    )
    if base is None:
        return
    for row in rows:
        if row is base or row.get("failed"):
            continue
        deltas = {}
        for metric in ("accuracy", "auroc", "correlation"):
            b, c = base.get(metric), row.get(metric)
            if b is not None and c is not None and b > 0:
                deltas[metric] = relative_delta(c, b)
        row["deltas"] = deltas


def _metadata(cfg: ExperimentConfig, train_ds: Dataset, trained: dict) -> dict:
    return {
        "config_hash": cfg.config_hash(),
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "backbone": cfg.backbone,
        "techniques": cfg.techniques_to_run(),
        "external_adapters": list(cfg.external_adapters),
        "train_dataset": {
            "spec": cfg.train_dataset,
            "name": train_ds.name,
            "fingerprint": dataset_fingerprint(train_ds),
        },
        "checkpoint_keys": {tech: key for tech, (key, _) in trained.items()},
        "rejects": {
            train_ds.name: len(train_ds.provenance.get("rejects", ())),
        },
    }


def run_experiment(cfg: ExperimentConfig) -> EvalReport:
    """Train (or load cached) models and evaluate every configured
    technique and adapter on every eval dataset's test split."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        report = _run_experiment_stages(cfg, out_dir)
    except StageFailure as failure:
        _mark_failure(out_dir, failure)
        raise
    except Exception as err:  # anything unplanned is a runtime failure
        failure = StageFailure("runtime", err)
        _mark_failure(out_dir, failure)
        raise failure from err
    return report


def _run_experiment_stages(cfg: ExperimentConfig, out_dir: Path) -> EvalReport:
    try:
        backbone = get_backbone(cfg.backbone)
    except Exception as err:
        raise StageFailure("config", err) from err

    try:
        train_ds = resolve_dataset(cfg.train_dataset)
        eval_sets = [resolve_dataset(spec) for spec in cfg.eval_datasets]
    except Exception as err:
        raise StageFailure("data", err) from err

    techniques = cfg.techniques_to_run()
    trained: dict[str, tuple[str, object]] = {}
    shared_models: dict[str, object] = {}
    if not cfg.retrain_per_eval_dataset:
        for tech in techniques:
            try:
                model, did_train, key, log = train_or_load(cfg, tech, train_ds, backbone)
            except Exception as err:
                raise StageFailure("train", err) from err
            shared_models[tech] = model
            trained[tech] = (key, log)
            if did_train:
                write_trainlog(log, out_dir / f"trainlog_{tech}.jsonl")

    groups = []
    plot_data = []
    for spec, ds in zip(cfg.eval_datasets, eval_sets):
        test = ds.subset("test")
        rows: list[dict] = []
        rows_scores = []
        for tech in techniques:
            if cfg.retrain_per_eval_dataset:
                try:
                    model, did_train, key, log = train_or_load(cfg, tech, ds, backbone)
                except Exception as err:
                    raise StageFailure("train", err) from err
                trained[f"{tech}:{ds.name}"] = (key, log)
                if did_train:
                    write_trainlog(log, out_dir / f"trainlog_{tech}_{_safe_name(ds.name)}.jsonl")
            else:
                model = shared_models[tech]
            try:
                scored = score_technique(cfg, tech, model, test.examples)
            except Exception as err:
                raise StageFailure("score", err) from err
            descriptor = n_refs_descriptor_for(tech, cfg.selection_policy)
            try:
                row = _metric_row(tech, descriptor, scored)
            except MetricError as err:
                raise StageFailure("metrics", err) from err
            rows.append(row)
            rows_scores.append((tech, scored.scores, scored.labels))
        for adapter in cfg.external_adapters:
            try:
                scored = score_with_external(adapter, test)
                row = _metric_row(f"adapter:{adapter}", "-", scored)
            except (AdapterError, MetricError) as err:
                raise StageFailure("score", err) from err
            rows.append(row)
            rows_scores.append((f"adapter:{adapter}", scored.scores, scored.labels))
        _attach_deltas(rows, cfg.baseline_technique)
        expected = len(techniques) + len(cfg.external_adapters)
        assert len(rows) == expected, "every technique appears exactly once per dataset"
        groups.append(
            {
                "dataset": ds.name,
                "fingerprint": dataset_fingerprint(ds),
                "n_examples": len(test),
                "rejects": len(ds.provenance.get("rejects", ())),
                "rows": rows,
            }
        )
        plot_data.append(rows_scores)

    report = EvalReport(metadata=_metadata(cfg, train_ds, trained), groups=groups, plot_data=plot_data)
    try:
        write_report(report, out_dir)
    except Exception as err:
        raise StageFailure("report", err) from err
    return report


def run_ablation_matrix(cfg: ExperimentConfig) -> EvalReport:
    """Run the fixed five-row reference-budget ablation.

    Rows are isolated: a failing row is marked failed in the report and
    its siblings still run. baseline_technique is ignored here; the
    matrix is its own comparison."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        backbone = get_backbone(cfg.backbone)
        train_ds = resolve_dataset(cfg.train_dataset)
        eval_sets = [resolve_dataset(spec) for spec in cfg.eval_datasets]
    except Exception as err:
        failure = StageFailure("data", err)
        _mark_failure(out_dir, failure)
        raise failure from err

    groups = []
    plot_data = []
    row_cfgs = []
    for i, (tech, overrides) in enumerate(ABLATION_MATRIX, start=1):
        policy = replace(cfg.selection_policy, **overrides)
        row_cfgs.append((i, tech, replace(cfg, technique=tech, selection_policy=policy)))

    models: dict[int, object] = {}
    trained: dict[str, tuple[str, object]] = {}
    for i, tech, row_cfg in row_cfgs:
        try:
            model, did_train, key, log = train_or_load(row_cfg, tech, train_ds, backbone)
            models[i] = model
            trained[f"row{i}_{tech}"] = (key, log)
            if did_train:
                write_trainlog(log, out_dir / f"trainlog_row{i}_{tech}.jsonl")
        except Exception as err:
            models[i] = StageFailure("train", err)

    for ds in eval_sets:
        test = ds.subset("test")
        rows: list[dict] = []
        rows_scores = []
        for i, tech, row_cfg in row_cfgs:
            descriptor = n_refs_descriptor_for(tech, row_cfg.selection_policy)
            label = f"row{i}_{tech}"
            outcome = models[i]
            if isinstance(outcome, StageFailure):
                rows.append(
                    {
                        "technique": tech,
                        "n_refs": descriptor,
                        "failed": True,
                        "error": str(outcome),
                    }
                )
                continue
            try:
                scored = score_technique(row_cfg, tech, outcome, test.examples)
                row = _metric_row(tech, descriptor, scored)
            except Exception as err:
                stage = "metrics" if isinstance(err, MetricError) else "score"
                rows.append(
                    {
                        "technique": tech,
                        "n_refs": descriptor,
                        "failed": True,
                        "error": str(StageFailure(stage, err)),
                    }
                )
                continue
            rows.append(row)
            rows_scores.append((label, scored.scores, scored.labels))
        groups.append(
            {
                "dataset": ds.name,
                "fingerprint": dataset_fingerprint(ds),
                "n_examples": len(test),
                "rejects": len(ds.provenance.get("rejects", ())),
                "rows": rows,
            }
        )
        plot_data.append(rows_scores)

    base_for_meta = replace(cfg, baseline_technique=None)
    metadata = _metadata(base_for_meta, train_ds, trained)
    metadata["ablation"] = [
        {"technique": tech, "n_refs": n_refs_descriptor_for(tech, replace(cfg.selection_policy, **ov))}
        for tech, ov in ABLATION_MATRIX
    ]
    report = EvalReport(metadata=metadata, groups=groups, plot_data=plot_data)
    try:
        write_report(report, out_dir)
    except Exception as err:
        failure = StageFailure("report", err)
        _mark_failure(out_dir, failure)
        raise failure from err
    return report
