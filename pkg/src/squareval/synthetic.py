"""Deterministic synthetic corpus that is separable by construction.

Every example is built from two disjoint vocabularies: topic words
(evidence for a correct answer) and distractor words (evidence against
one). Each example draws a 5-word topic and a 5-word distractor theme;
its three positive references are permutations of the topic, its three
negative references are permutations of the distractor theme, and the
6-token target mixes the two: a correct target carries 4 or 5 topic
words, an incorrect one at most 1.

The labeling oracle is pure token overlap: label 1 exactly when the
target shares at least OVERLAP_THRESHOLD (= 3) tokens with a positive
reference. Generated targets keep a one-token buffer on each side of
that threshold, so labels are unambiguous under the oracle while a
learned scorer still sees graded overlap. oracle_label() re-derives
labels from text so tests can verify every generated example against
it.

Vocabulary construction is hash-aware: candidate syllable words are
scanned in a fixed order and kept only if their embedding slot and
sign (under the toy hashed bag-of-tokens backbone) are not yet taken.
Every kept word therefore occupies a private coordinate, the question
is a fixed string, and all encoded strings have identical token
counts, which together make the corpus exactly linearly separable for
an affine head on averaged toy features.
"""

from __future__ import annotations

import itertools

import numpy as np

from .data import NEGATIVE, POSITIVE, Dataset, QAExample, Reference
from .scorer import TOY_DIM, fnv1a64

OVERLAP_THRESHOLD = 3
TOPIC_SIZE = 5
TARGET_LEN = 6
QUESTION = "which words belong to the topic group?"
DATASET_NAME = "toy-separable"
DEFAULT_SEED = 20240501

_SYLLABLES = ("ba", "de", "ki", "lo", "mu", "na", "po", "ra", "su", "ta", "vo", "ze")


def _build_vocabularies(words_per_side: int = 20) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Scan syllable words in a fixed order, keeping only words whose
    embedding slot is unclaimed (one word per slot, so no two vocabulary
    words can interfere); alternate kept words between the topic and
    distractor sides."""
    taken = set()
    sides: tuple[list[str], list[str]] = ([], [])
    turn = 0
    for a, b, c in itertools.product(_SYLLABLES, repeat=3):
        word = a + b + c
        slot = fnv1a64(word.encode("utf-8")) % TOY_DIM
        if slot in taken:
            continue
        taken.add(slot)
        sides[turn % 2].append(word)
        turn += 1
        if len(sides[0]) == words_per_side and len(sides[1]) == words_per_side:
            break
    if len(sides[0]) < words_per_side or len(sides[1]) < words_per_side:
        raise RuntimeError("syllable space exhausted before filling the vocabularies")
    return tuple(sides[0]), tuple(sides[1])


TOPIC_VOCAB, DISTRACTOR_VOCAB = _build_vocabularies()


def oracle_label(ex: QAExample) -> int:
    """Re-derive the label from text alone: 1 iff the target shares at
    least OVERLAP_THRESHOLD tokens with some positive reference."""
    target = set(ex.target_answer.split())
    return int(
        any(len(target & set(ref.text.split())) >= OVERLAP_THRESHOLD for ref in ex.pos_refs)
    )


def _permutation_text(rng: np.random.Generator, words) -> str:
    return " ".join(words[i] for i in rng.permutation(len(words)))


def _make_example(rng: np.random.Generator, example_id: str, split: str, label: int) -> QAExample:
    topic = [TOPIC_VOCAB[i] for i in rng.choice(len(TOPIC_VOCAB), TOPIC_SIZE, replace=False)]
    theme = [
        DISTRACTOR_VOCAB[i]
        for i in rng.choice(len(DISTRACTOR_VOCAB), TOPIC_SIZE, replace=False)
    ]
    if label == 1:
        n_topic = int(rng.integers(OVERLAP_THRESHOLD + 1, TOPIC_SIZE + 1))  # 4..5
    else:
        n_topic = int(rng.integers(0, OVERLAP_THRESHOLD - 1))  # 0..1
    picked_topic = [topic[i] for i in rng.choice(TOPIC_SIZE, n_topic, replace=False)]
    n_fill = TARGET_LEN - n_topic
    # themes have 5 words; a 6-token target may need one repeated filler
    fill = [theme[int(rng.integers(0, TOPIC_SIZE))] for _ in range(n_fill)]
    target_words = picked_topic + fill
    target = " ".join(target_words[i] for i in rng.permutation(TARGET_LEN))
    return QAExample(
        example_id=example_id,
        question=QUESTION,
        target_answer=target,
        label=label,
        pos_refs=tuple(Reference(_permutation_text(rng, topic), POSITIVE) for _ in range(3)),
        neg_refs=tuple(Reference(_permutation_text(rng, theme), NEGATIVE) for _ in range(3)),
        dataset_name=DATASET_NAME,
        split=split,
    )


def make_synthetic_dataset(
    n_train: int = 500, n_dev: int = 200, n_test: int = 200, seed: int = DEFAULT_SEED
) -> Dataset:
    """Generate the full corpus; labels alternate so every split is
    exactly balanced."""
    rng = np.random.default_rng(seed)
    examples = []
    for split, count in (("train", n_train), ("dev", n_dev), ("test", n_test)):
        for i in range(count):
            examples.append(_make_example(rng, f"syn-{split}-{i:04d}", split, i % 2))
    return Dataset(
        DATASET_NAME,
        tuple(examples),
        {"adapter": "make_synthetic_dataset", "seed": seed, "rejects": []},
    )
