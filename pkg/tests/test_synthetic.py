"""Tests for the deterministic synthetic corpus and its labeling oracle."""

from squareval.data import NEGATIVE, POSITIVE, QAExample, Reference
from squareval.encoding import unit_count
from squareval.scorer import TOY_DIM, fnv1a64
from squareval.selection import SelectionPolicy
from squareval.synthetic import (
    DISTRACTOR_VOCAB,
    OVERLAP_THRESHOLD,
    TOPIC_VOCAB,
    make_synthetic_dataset,
    oracle_label,
)
from squareval.training import TrainConfig, encode_dataset


def test_vocabularies_are_disjoint_and_sized():
    assert len(TOPIC_VOCAB) == 20
    assert len(DISTRACTOR_VOCAB) == 20
    assert not set(TOPIC_VOCAB) & set(DISTRACTOR_VOCAB)


def test_vocabulary_words_occupy_private_slots():
    slots = [fnv1a64(w.encode()) % TOY_DIM for w in TOPIC_VOCAB + DISTRACTOR_VOCAB]
    assert len(set(slots)) == len(slots)


def test_split_sizes_and_balance():
    ds = make_synthetic_dataset()
    for split, want in (("train", 500), ("dev", 200), ("test", 200)):
        sub = ds.subset(split)
        assert len(sub) == want
        labels = [ex.label for ex in sub.examples]
        assert sum(labels) == want // 2


def test_every_label_matches_the_overlap_oracle():
    ds = make_synthetic_dataset()
    assert all(oracle_label(ex) == ex.label for ex in ds.examples)


def test_generation_is_deterministic():
    assert make_synthetic_dataset(seed=5) == make_synthetic_dataset(seed=5)
    assert make_synthetic_dataset(seed=5) != make_synthetic_dataset(seed=6)


def test_example_shape():
    ds = make_synthetic_dataset(n_train=10, n_dev=4, n_test=4)
    for ex in ds.examples:
        assert len(ex.pos_refs) == 3 and len(ex.neg_refs) == 3
        assert len(ex.target_answer.split()) == 6
        for ref in ex.pos_refs:
            assert sorted(ref.text.split()) == sorted(set(ref.text.split()))
            assert set(ref.text.split()) <= set(TOPIC_VOCAB)
        for ref in ex.neg_refs:
            assert set(ref.text.split()) <= set(DISTRACTOR_VOCAB)


def test_oracle_threshold_boundary():
    topic = list(TOPIC_VOCAB[:5])
    theme = list(DISTRACTOR_VOCAB[:5])

    def example(shared):
        words = topic[:shared] + theme[: 6 - shared]
        return QAExample(
            example_id="hand",
            question="which words belong to the topic group?",
            target_answer=" ".join(words),
            label=1,  # label under test is the oracle's, not this field
            pos_refs=(Reference(" ".join(topic), POSITIVE),),
            neg_refs=(Reference(" ".join(theme), NEGATIVE),),
            dataset_name="hand",
            split="test",
        )

    assert oracle_label(example(OVERLAP_THRESHOLD)) == 1
    assert oracle_label(example(OVERLAP_THRESHOLD - 1)) == 0


def test_encoded_lengths_are_constant():
    # under any fixed budget the encoded strings all have the same unit
    # count, which is what makes the corpus exactly linearly separable
    # for a mean-pooled bag-of-tokens backbone
    ds = make_synthetic_dataset(n_train=30, n_dev=10, n_test=10)
    for budget in (5, 6):
        cfg = TrainConfig(selection_policy=SelectionPolicy(total_budget=budget))
        lengths = {unit_count(e.text) for e in encode_dataset(ds.examples, cfg)}
        assert len(lengths) == 1
