"""Demo: the evaluation metrics and the table row format.

Computes accuracy, AUROC, and point-biserial correlation on a small
scored set, then shows relative deltas against a baseline row the way
reports print them.
"""

from squareval import MetricRow, ScoredSet, accuracy, auroc, pearson, relative_delta


def main():
    scored = ScoredSet(
        scores=(0.92, 0.81, 0.65, 0.43, 0.38, 0.12),
        labels=(1, 1, 0, 1, 0, 0),
        example_ids=tuple(f"ex{i}" for i in range(6)),
    )
    print(f"accuracy:    {accuracy(scored):.4f}   (threshold 0.5, inclusive)")
    print(f"AUROC:       {auroc(scored):.4f}   (tie-aware pairwise ranking)")
    print(f"correlation: {pearson(scored):.4f}   (score vs 0/1 label)")

    candidate = MetricRow(
        technique="SQUARE",
        n_refs_descriptor="5",
        accuracy=accuracy(scored),
        auroc=auroc(scored),
        correlation=pearson(scored),
    )
    baseline = MetricRow(
        technique="TR",
        n_refs_descriptor="1",
        accuracy=0.667,
        auroc=0.778,
        correlation=0.52,
    )
    print("\nrelative deltas against the baseline row (percent):")
    for metric in ("accuracy", "auroc", "correlation"):
        delta = relative_delta(getattr(candidate, metric), getattr(baseline, metric))
        print(f"  {metric:11s} {getattr(candidate, metric):.4f} vs "
              f"{getattr(baseline, metric):.4f} -> {delta:+.2f}%")

    print("\nrow record as it appears in report.json:")
    print(f"  {candidate.to_record()}")


if __name__ == "__main__":
    main()
