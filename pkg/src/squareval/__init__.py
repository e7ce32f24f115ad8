"""Learned multi-reference scoring for QA answer correctness.

A scorer reads a question, a candidate answer, and pools of known
correct and known incorrect reference answers, and returns the
probability that the candidate is correct. The package covers the
whole workflow: corpus adaptation, reference selection, input
encoding, training, metrics, and a config-driven experiment harness
with a CLI front end.
"""

from .data import (
    Dataset,
    QAExample,
    Reference,
    adapt_as2_table,
    dataset_fingerprint,
    filter_clean_setting,
    load_jsonl,
    majority_vote,
    save_jsonl,
)
from .encoding import VARIANTS, EncodedInput, encode
from .harness import (
    ExperimentConfig,
    load_config,
    register_external_adapter,
    run_ablation_matrix,
    run_experiment,
    score_with_external,
)
from .metrics import MetricRow, ScoredSet, accuracy, auroc, pearson, relative_delta
from .scorer import (
    ScorerModel,
    get_backbone,
    load_checkpoint,
    new_model,
    register_backbone,
    save_checkpoint,
    score,
    score_batch,
)
from .selection import SelectionPolicy, select_references
from .synthetic import make_synthetic_dataset
from .training import TOY_LEARNING_RATE, TrainConfig, train

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EncodedInput",
    "ExperimentConfig",
    "MetricRow",
    "QAExample",
    "Reference",
    "ScoredSet",
    "ScorerModel",
    "SelectionPolicy",
    "TOY_LEARNING_RATE",
    "TrainConfig",
    "VARIANTS",
    "accuracy",
    "adapt_as2_table",
    "auroc",
    "dataset_fingerprint",
    "encode",
    "filter_clean_setting",
    "get_backbone",
    "load_checkpoint",
    "load_config",
    "load_jsonl",
    "majority_vote",
    "make_synthetic_dataset",
    "new_model",
    "pearson",
    "register_backbone",
    "register_external_adapter",
    "relative_delta",
    "run_ablation_matrix",
    "run_experiment",
    "save_checkpoint",
    "save_jsonl",
    "score",
    "score_batch",
    "score_with_external",
    "select_references",
    "train",
    "__version__",
]
