"""Supervised training of the scoring head with best-AUROC selection.

The loop is plain minibatch gradient descent on binary cross-entropy
with Adam (beta1=0.9, beta2=0.999, eps=1e-8, no weight decay). Head
weights stay float32 (so the selected snapshot equals its checkpoint
byte-for-byte) while gradients and optimizer state accumulate in
float64. References are selected once when the dataset is encoded, not
re-sampled per epoch; each epoch reshuffles example order from a
numpy Generator seeded by the config seed. The last partial minibatch
is trained on, not dropped.

After every epoch the model is snapshotted and evaluated on the dev
split; the snapshot with the best dev AUROC (first occurrence on ties)
is returned, so the winning model's dev AUROC always equals the
maximum AUROC in the log.

The paper-scale default learning rate (1e-6) is tuned for fine-tuning
a large pretrained transformer. The toy backbone's hashed features
need far larger steps; TOY_LEARNING_RATE (0.5) is the documented
override used by the toy-scale recipes and tests. Any rate within
roughly [0.3, 2.0] trains the toy setup to the same plateau.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, QAExample
from .encoding import DEFAULT_MAX_UNITS, VARIANTS, EncodedInput, encode
from .metrics import ScoredSet, accuracy, auroc
from .selection import SelectionPolicy, select_references

ADAM = "adam"
FP32 = "fp32"
AUROC_SELECTION = "auroc"

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

LOSS_CLAMP = 1e-7
TOY_LEARNING_RATE = 0.5

# backbone encode_batch calls are chunked to bound peak memory
_ENCODE_CHUNK = 256


class TrainingError(RuntimeError):
    """Training could not run or diverged."""


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters and data-preparation choices for one run."""

    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 1e-6
    optimizer: str = ADAM
    precision: str = FP32
    shuffle_each_epoch: bool = True
    seed: int = 0
    selection_metric: str = AUROC_SELECTION
    encoding_variant: str = "SQUARE"
    selection_policy: SelectionPolicy = field(default_factory=SelectionPolicy)
    max_units: int = DEFAULT_MAX_UNITS

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.optimizer != ADAM:
            raise ValueError(f"optimizer must be {ADAM!r}, got {self.optimizer!r}")
        if self.precision != FP32:
            raise ValueError(f"precision must be {FP32!r}, got {self.precision!r}")
        if self.selection_metric != AUROC_SELECTION:
            raise ValueError(f"selection_metric must be {AUROC_SELECTION!r}")
        if self.encoding_variant not in VARIANTS:
            raise ValueError(f"unknown encoding variant {self.encoding_variant!r}")

    def to_record(self) -> dict:
        policy = self.selection_policy
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "optimizer": self.optimizer,
            "precision": self.precision,
            "shuffle_each_epoch": self.shuffle_each_epoch,
            "seed": self.seed,
            "selection_metric": self.selection_metric,
            "encoding_variant": self.encoding_variant,
            "selection_policy": {
                "total_budget": policy.total_budget,
                "mode": policy.mode,
                "range_low": policy.range_low,
                "range_high": policy.range_high,
                "split_rule": policy.split_rule,
                "seed": policy.seed,
            },
            "max_units": self.max_units,
        }


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    dev_accuracy: float
    dev_auroc: float

    def to_record(self) -> dict:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "dev_accuracy": self.dev_accuracy,
            "dev_auroc": self.dev_auroc,
        }


@dataclass(frozen=True)
class TrainLog:
    entries: tuple[EpochRecord, ...]
    selected_epoch: int


def write_trainlog(log: TrainLog, path) -> None:
    """One epoch record per JSONL line, then the selection record."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for entry in log.entries:
            fh.write(json.dumps(entry.to_record(), sort_keys=True) + "\n")
        fh.write(json.dumps({"selected_epoch": log.selected_epoch}) + "\n")


def loss(p: float, y: int) -> float:
    """Binary cross-entropy -[y ln p + (1-y) ln(1-p)], clamped.

    Implemented on the probability assigned to the true class, so
    loss(p, 1) and loss(1-p, 0) evaluate the identical expression.
    """
    if y not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {y!r}")
    q = p if y == 1 else 1.0 - p
    q = min(max(q, LOSS_CLAMP), 1.0 - LOSS_CLAMP)
    return -math.log(q)


def encode_example(ex: QAExample, variant: str, policy: SelectionPolicy, max_units: int) -> EncodedInput:
    """Select references for one example and serialize it."""
    pos, neg = select_references(ex, policy)
    return encode(
        ex.question,
        ex.target_answer,
        [r.text for r in pos],
        [r.text for r in neg],
        variant,
        max_units=max_units,
        example_id=ex.example_id,
    )


def encode_dataset(examples, cfg: TrainConfig) -> list[EncodedInput]:
    """Encode every example once; selections are frozen here for the
    rest of the run."""
    return [
        encode_example(ex, cfg.encoding_variant, cfg.selection_policy, cfg.max_units)
        for ex in examples
    ]


def _features(backbone, encoded: list[EncodedInput]) -> np.ndarray:
    chunks = [
        backbone.encode_batch([e.text for e in encoded[i : i + _ENCODE_CHUNK]])
        for i in range(0, len(encoded), _ENCODE_CHUNK)
    ]
    if not chunks:
        return np.zeros((0, backbone.dim), dtype=np.float32)
    return np.concatenate(chunks, axis=0)


def _sigmoid_vec(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def batch_loss(weights: np.ndarray, bias: float, features: np.ndarray, labels: np.ndarray) -> float:
    """Mean clamped BCE of the affine head over one batch (float64)."""
    z = features.astype(np.float64) @ np.asarray(weights, dtype=np.float64) + float(bias)
    p = _sigmoid_vec(z)
    q = np.where(labels == 1, p, 1.0 - p)
    q = np.clip(q, LOSS_CLAMP, 1.0 - LOSS_CLAMP)
    return float(np.mean(-np.log(q)))


def batch_gradients(
    weights: np.ndarray, bias: float, features: np.ndarray, labels: np.ndarray
) -> tuple[np.ndarray, float]:
    """Analytic gradient of mean BCE w.r.t. head weights and bias."""
    x = features.astype(np.float64)
    z = x @ np.asarray(weights, dtype=np.float64) + float(bias)
    residual = _sigmoid_vec(z) - labels.astype(np.float64)
    return x.T @ residual / len(labels), float(np.mean(residual))


def select_best_epoch(aurocs) -> int:
    """1-based argmax with first occurrence winning ties."""
    if not aurocs:
        raise ValueError("no epochs to select from")
    best = max(aurocs)
    return list(aurocs).index(best) + 1


def train(train_set: Dataset, dev_set: Dataset, cfg: TrainConfig, backbone):
    """Train a fresh head on train_set, selecting the epoch snapshot
    with the best dev AUROC. Returns (ScorerModel, TrainLog)."""
    from .scorer import new_model

    if len(train_set) == 0:
        raise TrainingError("train_set is empty")
    if len(dev_set) == 0:
        raise TrainingError("dev_set is empty")
    dev_labels_set = {ex.label for ex in dev_set.examples}
    if dev_labels_set != {0, 1}:
        raise TrainingError("dev_set must contain both labels; AUROC is undefined otherwise")

    train_encoded = encode_dataset(train_set.examples, cfg)
    dev_encoded = encode_dataset(dev_set.examples, cfg)
    x_train = _features(backbone, train_encoded)
    x_dev = _features(backbone, dev_encoded).astype(np.float64)
    y_train = np.array([ex.label for ex in train_set.examples], dtype=np.int64)
    dev_labels = tuple(ex.label for ex in dev_set.examples)
    dev_ids = tuple(ex.example_id for ex in dev_set.examples)

    model = new_model(backbone)
    n = len(y_train)
    rng = np.random.default_rng(cfg.seed)
    m_w = np.zeros(backbone.dim, dtype=np.float64)
    v_w = np.zeros(backbone.dim, dtype=np.float64)
    m_b = v_b = 0.0
    step = 0

    snapshots = []
    entries = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n) if cfg.shuffle_each_epoch else np.arange(n)
        loss_sum = 0.0
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            xb, yb = x_train[batch], y_train[batch]
            w64 = model.weights.astype(np.float64)
            b64 = float(model.bias)
            batch_mean = batch_loss(w64, b64, xb, yb)
            if not math.isfinite(batch_mean):
                raise TrainingError(f"non-finite loss at epoch {epoch}, step {step + 1}")
            loss_sum += batch_mean * len(batch)
            g_w, g_b = batch_gradients(w64, b64, xb, yb)
            step += 1
            m_w = ADAM_BETA1 * m_w + (1.0 - ADAM_BETA1) * g_w
            v_w = ADAM_BETA2 * v_w + (1.0 - ADAM_BETA2) * g_w**2
            m_b = ADAM_BETA1 * m_b + (1.0 - ADAM_BETA1) * g_b
            v_b = ADAM_BETA2 * v_b + (1.0 - ADAM_BETA2) * g_b**2
            bias1 = 1.0 - ADAM_BETA1**step
            bias2 = 1.0 - ADAM_BETA2**step
            w64 = w64 - cfg.learning_rate * (m_w / bias1) / (np.sqrt(v_w / bias2) + ADAM_EPS)
            b64 = b64 - cfg.learning_rate * (m_b / bias1) / (math.sqrt(v_b / bias2) + ADAM_EPS)
            model.weights = w64.astype(np.float32)
            model.bias = np.float32(b64)

        snap = model.snapshot()
        snapshots.append(snap)
        # evaluate the float32 snapshot itself, so the selected model's
        # dev AUROC is exactly what the log reports
        z = x_dev @ snap[0].astype(np.float64) + float(snap[1])
        dev_scores = tuple(float(p) for p in _sigmoid_vec(z))
        dev_set_scored = ScoredSet(dev_scores, dev_labels, dev_ids)
        entries.append(
            EpochRecord(
                epoch=epoch,
                train_loss=loss_sum / n,
                dev_accuracy=accuracy(dev_set_scored),
                dev_auroc=auroc(dev_set_scored),
            )
        )

    selected = select_best_epoch([e.dev_auroc for e in entries])
    model.restore(snapshots[selected - 1])
    return model, TrainLog(entries=tuple(entries), selected_epoch=selected)
