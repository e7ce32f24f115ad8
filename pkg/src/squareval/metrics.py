"""Agreement statistics between metric scores and human gold labels.

All metrics operate on a ScoredSet: parallel scores in [0, 1], binary
labels, and example ids. Undefined cases (empty input, single-class
AUROC, zero-variance correlation) raise MetricError instead of
returning NaN, so a bad value can never slip into an aggregated report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats


class MetricError(ValueError):
    """Metric undefined for the given inputs."""


@dataclass(frozen=True)
class ScoredSet:
    """Scores and gold labels for a set of examples, kept in parallel."""

    scores: tuple[float, ...]
    labels: tuple[int, ...]
    example_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        object.__setattr__(self, "labels", tuple(int(y) for y in self.labels))
        object.__setattr__(self, "example_ids", tuple(self.example_ids))
        if not (len(self.scores) == len(self.labels) == len(self.example_ids)):
            raise MetricError("scores, labels, example_ids must have equal lengths")
        for s in self.scores:
            if not 0.0 <= s <= 1.0:
                raise MetricError(f"score out of [0, 1]: {s!r}")
        for y in self.labels:
            if y not in (0, 1):
                raise MetricError(f"label must be 0 or 1: {y!r}")

    def __len__(self):
        return len(self.scores)


def _arrays(s: ScoredSet):
    if len(s) == 0:
        raise MetricError("metric undefined on an empty ScoredSet")
    return np.asarray(s.scores, dtype=np.float64), np.asarray(s.labels, dtype=np.int64)


def accuracy(s: ScoredSet, threshold: float = 0.5) -> float:
    """Fraction of examples where (score >= threshold) equals the label.

    The threshold is inclusive on the positive side: a score exactly at
    the threshold predicts label 1.
    """
    scores, labels = _arrays(s)
    predicted = scores >= threshold
    return float(np.mean(predicted == labels.astype(bool)))


def auroc(s: ScoredSet) -> float:
    """Area under the ROC curve via the Mann-Whitney statistic.

    Equals the mean over all (positive, negative) pairs of
    1 / 0.5 / 0 for score+ above / equal to / below score-. Computed
    from average ranks, so ties get the 0.5 credit exactly.
    """
    scores, labels = _arrays(s)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUROC undefined: both classes must be present")
    ranks = stats.rankdata(scores, method="average")
    u = float(ranks[labels == 1].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def pearson(s: ScoredSet) -> float:
    """Sample Pearson coefficient between scores and binary labels."""
    scores, labels = _arrays(s)
    if len(set(s.scores)) < 2:
        raise MetricError("correlation undefined: scores have zero variance")
    if len(set(s.labels)) < 2:
        raise MetricError("correlation undefined: labels have zero variance")
    return float(np.corrcoef(scores, labels.astype(np.float64))[0, 1])


def relative_delta(candidate: float, baseline: float) -> float:
    """Signed percentage change of candidate relative to baseline."""
    if baseline <= 0:
        raise MetricError(f"relative delta undefined for baseline {baseline!r}")
    return 100.0 * (candidate - baseline) / baseline


@dataclass(frozen=True)
class MetricRow:
    """One line of a results table: a technique, its reference budget
    descriptor (e.g. "5" or "[1,5]"), and its metric values, with
    optional relative deltas against a baseline technique."""

    technique: str
    n_refs_descriptor: str
    accuracy: float
    auroc: float
    correlation: float
    deltas: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise MetricError(f"accuracy out of [0, 1]: {self.accuracy!r}")
        if not 0.0 <= self.auroc <= 1.0:
            raise MetricError(f"auroc out of [0, 1]: {self.auroc!r}")
        if not -1.0 <= self.correlation <= 1.0:
            raise MetricError(f"correlation out of [-1, 1]: {self.correlation!r}")

    def to_record(self) -> dict:
        record = {
            "technique": self.technique,
            "n_refs": self.n_refs_descriptor,
            "accuracy": self.accuracy,
            "auroc": self.auroc,
            "correlation": self.correlation,
        }
        if self.deltas:
            record["deltas"] = dict(sorted(self.deltas.items()))
        return record
