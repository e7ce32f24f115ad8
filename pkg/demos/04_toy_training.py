"""Demo: training the affine head on the synthetic separable corpus.

Trains with the documented toy-scale learning rate, prints the per
epoch log, and evaluates the selected snapshot on the held-out test
split. Finishes in seconds on a CPU.
"""

from squareval import (
    ScoredSet,
    TOY_LEARNING_RATE,
    TrainConfig,
    accuracy,
    auroc,
    get_backbone,
    make_synthetic_dataset,
    score_batch,
    train,
)
from squareval.training import encode_dataset


def main():
    ds = make_synthetic_dataset()
    print(f"corpus: {len(ds.subset('train'))} train / {len(ds.subset('dev'))} dev / "
          f"{len(ds.subset('test'))} test")

    cfg = TrainConfig(epochs=8, batch_size=32, learning_rate=TOY_LEARNING_RATE, seed=0)
    model, log = train(ds.subset("train"), ds.subset("dev"), cfg, get_backbone("toy"))

    print("\nepoch  train_loss  dev_acc  dev_auroc")
    for entry in log.entries:
        print(f"{entry.epoch:5d}  {entry.train_loss:10.4f}  {entry.dev_accuracy:7.3f}"
              f"  {entry.dev_auroc:9.4f}")
    print(f"selected epoch: {log.selected_epoch} (best dev AUROC)")

    test = ds.subset("test")
    scores = score_batch(model, encode_dataset(test.examples, cfg))
    scored = ScoredSet(
        scores=tuple(scores),
        labels=tuple(ex.label for ex in test.examples),
        example_ids=tuple(ex.example_id for ex in test.examples),
    )
    print(f"\ntest accuracy: {accuracy(scored):.3f}")
    print(f"test AUROC:    {auroc(scored):.4f}")


if __name__ == "__main__":
    main()
