"""Seeded selection of reference answers under a total budget.

Selection must reproduce bit-for-bit across runs, platforms, and
dataset orderings, so randomness comes from a fixed, documented
generator rather than anything environment-dependent:

- Generator: SplitMix64 (Steele, Lea & Flood's 64-bit mixer; the same
  finalizer used to seed the xoshiro family). State advances by the
  golden-gamma constant 0x9E3779B97F4A7C15; output is the xor-shift /
  multiply finalizer.
- Stream derivation: the per-example state is the first 8 bytes
  (little-endian) of SHA-256(seed as 8-byte little-endian ||
  example_id as UTF-8). Hashing makes the stream a pure function of
  (seed, example_id): shuffling a dataset cannot change what any
  example gets.
- Bounded draws use rejection sampling, so results are exactly uniform.
- Sampling n of m pool items runs a partial Fisher-Yates over indices
  and then sorts the chosen indices, so output preserves pool order.
  When the whole pool fits the target (m <= n) it is returned as-is
  and the stream is not advanced.

Draw order within one example is fixed: effective budget first (only
under random_range), then the positive sample, then the negative one.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

from .data import QAExample, Reference

FIXED_K = "fixed_k"
RANDOM_RANGE = "random_range"
MODES = (FIXED_K, RANDOM_RANGE)

BALANCED = "balanced"
POSITIVES_FIRST = "positives_first"
SPLIT_RULES = (BALANCED, POSITIVES_FIRST)

POSITIVE_ONLY = "positive_only"
NEGATIVE_ONLY = "negative_only"
BOTH = "both"
POLARITY_RESTRICTIONS = (POSITIVE_ONLY, NEGATIVE_ONLY, BOTH)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Minimal SplitMix64 stream; state and outputs are 64-bit."""

    def __init__(self, state: int):
        self._state = state & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; n=1 consumes no draw."""
        if n <= 0:
            raise ValueError(f"randbelow requires n >= 1, got {n}")
        if n == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


def stream_for_example(seed: int, example_id: str) -> SplitMix64:
    """Derive the per-example SplitMix64 stream from (seed, example_id)."""
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    digest = hashlib.sha256(seed.to_bytes(8, "little") + example_id.encode("utf-8")).digest()
    return SplitMix64(int.from_bytes(digest[:8], "little"))


@dataclass(frozen=True)
class SelectionPolicy:
    """How many references to keep and how to pick them.

    total_budget is the k of fixed_k mode; random_range draws k
    uniformly from [range_low, range_high] per example instead.
    """

    total_budget: int = 5
    mode: str = FIXED_K
    range_low: int = 1
    range_high: int = 5
    split_rule: str = BALANCED
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.split_rule not in SPLIT_RULES:
            raise ValueError(f"split_rule must be one of {SPLIT_RULES}, got {self.split_rule!r}")
        if self.total_budget < 1:
            raise ValueError(f"total_budget must be >= 1, got {self.total_budget}")
        if self.range_low < 1 or self.range_high < 1:
            raise ValueError("range_low and range_high must be >= 1")
        if self.range_low > self.range_high:
            raise ValueError(f"range_low {self.range_low} exceeds range_high {self.range_high}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def n_refs_descriptor(self) -> str:
        """Budget descriptor for report tables: "5" or "[1,5]"."""
        if self.mode == RANDOM_RANGE:
            return f"[{self.range_low},{self.range_high}]"
        return str(self.total_budget)


def _split_targets(k: int, pool_pos: int, pool_neg: int, rule: str) -> tuple[int, int]:
    if rule == BALANCED:
        # favor positives for odd budgets; leftover budget from a
        # starved negative pool flows back to positives
        n_pos = min(pool_pos, math.ceil(k / 2))
        n_neg = min(pool_neg, k - n_pos)
        n_pos = min(pool_pos, n_pos + (k - n_pos - n_neg))
    else:
        n_pos = min(pool_pos, k)
        n_neg = min(pool_neg, k - n_pos)
    return n_pos, n_neg


def _sample_preserving_order(pool, n: int, rng: SplitMix64) -> list:
    if n <= 0:
        return []
    if len(pool) <= n:
        return list(pool)
    idx = list(range(len(pool)))
    for i in range(n):
        j = i + rng.randbelow(len(idx) - i)
        idx[i], idx[j] = idx[j], idx[i]
    return [pool[i] for i in sorted(idx[:n])]


def select_references(
    ex: QAExample, policy: SelectionPolicy
) -> tuple[list[Reference], list[Reference]]:
    """Pick references from the example's pools under the policy budget.

    Starved pools yield fewer references, never an error; the split
    rule decides how the budget divides between polarities.
    """
    rng = stream_for_example(policy.seed, ex.example_id)
    if policy.mode == RANDOM_RANGE:
        k = policy.range_low + rng.randbelow(policy.range_high - policy.range_low + 1)
    else:
        k = policy.total_budget
    n_pos, n_neg = _split_targets(k, len(ex.pos_refs), len(ex.neg_refs), policy.split_rule)
    chosen_pos = _sample_preserving_order(ex.pos_refs, n_pos, rng)
    chosen_neg = _sample_preserving_order(ex.neg_refs, n_neg, rng)
    return chosen_pos, chosen_neg


def restrict_polarity(selection, keep: str):
    """Drop one polarity from a (chosen_pos, chosen_neg) selection."""
    if keep not in POLARITY_RESTRICTIONS:
        raise ValueError(f"keep must be one of {POLARITY_RESTRICTIONS}, got {keep!r}")
    pos, neg = selection
    if keep == POSITIVE_ONLY:
        return list(pos), []
    if keep == NEGATIVE_ONLY:
        return [], list(neg)
    return list(pos), list(neg)


def restrict_pools(ex: QAExample, keep: str) -> QAExample:
    """Return the example with one polarity's pool emptied.

    Restricting pools before selection (rather than filtering the
    selection afterwards) lets a single-polarity run spend its whole
    budget on the kept polarity.
    """
    if keep not in POLARITY_RESTRICTIONS:
        raise ValueError(f"keep must be one of {POLARITY_RESTRICTIONS}, got {keep!r}")
    if keep == POSITIVE_ONLY:
        return replace(ex, neg_refs=())
    if keep == NEGATIVE_ONLY:
        return replace(ex, pos_refs=())
    return ex
