"""Tests for agreement metrics, each checked against an independent
oracle: brute-force pairwise counting for AUROC and the direct
covariance formula for Pearson."""

import math
import random

import numpy as np
import pytest
from numpy.testing import assert_allclose

from squareval.metrics import (
    MetricError,
    MetricRow,
    ScoredSet,
    accuracy,
    auroc,
    pearson,
    relative_delta,
)


def scored(scores, labels):
    ids = tuple(f"e{i}" for i in range(len(scores)))
    return ScoredSet(tuple(scores), tuple(labels), ids)


def auroc_bruteforce(scores, labels):
    """O(n^2) pairwise Mann-Whitney count; the independent oracle."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


def pearson_formula(scores, labels):
    """Direct covariance / (sigma_x sigma_y) evaluation; the oracle."""
    x = [float(v) for v in scores]
    y = [float(v) for v in labels]
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y)) / n
    sx = math.sqrt(sum((a - mx) ** 2 for a in x) / n)
    sy = math.sqrt(sum((b - my) ** 2 for b in y) / n)
    return cov / (sx * sy)


# ---------------------------------------------------------------- scored set


def test_scored_set_rejects_mismatched_lengths():
    with pytest.raises(MetricError):
        ScoredSet((0.1, 0.2), (1,), ("a", "b"))


def test_scored_set_rejects_out_of_range_scores():
    with pytest.raises(MetricError):
        scored([1.2], [1])
    with pytest.raises(MetricError):
        scored([-0.01], [0])


def test_metrics_reject_empty_set():
    empty = ScoredSet((), (), ())
    for fn in (accuracy, auroc, pearson):
        with pytest.raises(MetricError):
            fn(empty)


# ---------------------------------------------------------------- accuracy


def test_accuracy_direct_count():
    assert_allclose(accuracy(scored([0.9, 0.2, 0.6], [1, 0, 0])), 2 / 3)


def test_accuracy_perfect():
    assert accuracy(scored([0.8, 0.1, 0.95, 0.3], [1, 0, 1, 0])) == 1.0


def test_accuracy_threshold_is_inclusive():
    assert accuracy(scored([0.5], [1])) == 1.0
    assert accuracy(scored([0.5], [0])) == 0.0


def test_accuracy_complement_symmetry():
    # flipping labels and scores together preserves accuracy, provided
    # no score sits exactly on the 0.5 boundary
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 60)
        scores = [round(rng.uniform(0.0, 1.0), 3) for _ in range(n)]
        scores = [s if abs(s - 0.5) > 1e-9 else 0.51 for s in scores]
        labels = [rng.randint(0, 1) for _ in range(n)]
        flipped = scored([1.0 - s for s in scores], [1 - y for y in labels])
        assert_allclose(accuracy(scored(scores, labels)), accuracy(flipped), rtol=0, atol=0)


# ---------------------------------------------------------------- auroc


def test_auroc_hand_case():
    assert_allclose(auroc(scored([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])), 0.75)


def test_auroc_perfect_separation():
    assert auroc(scored([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0])) == 1.0


def test_auroc_all_ties():
    assert auroc(scored([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0])) == 0.5


def test_auroc_single_class_is_error():
    with pytest.raises(MetricError):
        auroc(scored([0.2, 0.9], [1, 1]))
    with pytest.raises(MetricError):
        auroc(scored([0.2, 0.9], [0, 0]))


def test_auroc_matches_bruteforce():
    rng = random.Random(20240501)
    for trial in range(60):
        n = rng.randint(2, 200)
        # coarse grid forces plenty of duplicate scores
        scores = [rng.randrange(0, 11) / 10.0 for _ in range(n)]
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[-1] = 0, 1
        got = auroc(scored(scores, labels))
        want = auroc_bruteforce(scores, labels)
        assert_allclose(got, want, rtol=0, atol=1e-12)


def test_auroc_invariant_under_monotone_transforms():
    rng = random.Random(4242)
    transforms = [
        lambda x: x**3,
        lambda x: x / 2.0 + 0.25,
        lambda x: (math.exp(x) - 1.0) / (math.e - 1.0),
    ]
    for _ in range(30):
        n = rng.randint(2, 80)
        scores = [rng.random() for _ in range(n)]
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[-1] = 0, 1
        base = auroc(scored(scores, labels))
        for t in transforms:
            assert_allclose(auroc(scored([t(x) for x in scores], labels)), base, atol=1e-12)


# ---------------------------------------------------------------- pearson


def test_pearson_against_formula_oracle():
    scores = [0.1, 0.2, 0.9, 1.0]
    labels = [0, 0, 1, 1]
    got = pearson(scored(scores, labels))
    assert 0.0 < got <= 1.0
    assert_allclose(got, pearson_formula(scores, labels), rtol=0, atol=1e-12)


def test_pearson_identity_and_inverse():
    assert_allclose(pearson(scored([0.0, 1.0, 1.0, 0.0], [0, 1, 1, 0])), 1.0)
    assert_allclose(pearson(scored([1.0, 0.0, 0.0, 1.0], [0, 1, 1, 0])), -1.0)


def test_pearson_zero_variance_is_error():
    with pytest.raises(MetricError):
        pearson(scored([0.4, 0.4, 0.4], [0, 1, 0]))
    with pytest.raises(MetricError):
        pearson(scored([0.1, 0.5, 0.9], [1, 1, 1]))


def test_pearson_random_against_oracle():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(3, 150)
        scores = [rng.random() for _ in range(n)]
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[-1] = 0, 1
        got = pearson(scored(scores, labels))
        assert_allclose(got, pearson_formula(scores, labels), rtol=0, atol=1e-12)


def test_pearson_affine_invariance():
    rng = random.Random(88)
    for _ in range(30):
        n = rng.randint(3, 100)
        scores = [rng.random() for _ in range(n)]
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[-1] = 0, 1
        # positive affine map chosen to keep scores inside [0, 1]
        a, b = 0.5, 0.25
        moved = [a * s + b for s in scores]
        assert_allclose(pearson(scored(moved, labels)), pearson(scored(scores, labels)), atol=1e-12)


# ---------------------------------------------------------------- deltas


def test_relative_delta_values():
    assert_allclose(relative_delta(0.833, 0.734), 100.0 * (0.833 - 0.734) / 0.734)
    assert round(relative_delta(0.833, 0.734), 2) == 13.49
    assert relative_delta(0.6, 0.6) == 0.0
    assert relative_delta(0.5, 1.0) == -50.0


def test_relative_delta_requires_positive_baseline():
    with pytest.raises(MetricError):
        relative_delta(0.5, 0.0)
    with pytest.raises(MetricError):
        relative_delta(0.5, -0.1)


# ---------------------------------------------------------------- rows


def test_metric_row_bounds():
    row = MetricRow("SQUARE", "5", accuracy=0.9, auroc=0.95, correlation=0.8)
    assert row.to_record()["n_refs"] == "5"
    with pytest.raises(MetricError):
        MetricRow("SQUARE", "5", accuracy=1.2, auroc=0.9, correlation=0.0)
    with pytest.raises(MetricError):
        MetricRow("SQUARE", "5", accuracy=0.9, auroc=0.9, correlation=-1.5)


def test_metric_row_record_includes_sorted_deltas():
    row = MetricRow("SQUARE", "5", 0.9, 0.95, 0.8, deltas={"auroc": 10.0, "accuracy": 5.0})
    record = row.to_record()
    assert list(record["deltas"]) == ["accuracy", "auroc"]
