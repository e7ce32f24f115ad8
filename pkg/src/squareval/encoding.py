"""Serializes (question, target, references) into the single text
sequence the scorer consumes.

Authoritative grammar, with variant-specific omissions:

    "Question: " q " Target: " a {" Pos_Ref: " ref} {" Neg_Ref: " ref}

Variants: SQUARE uses the question, the target, and every supplied
reference (positives first, order preserved); QT drops all references;
TR drops the question and keeps one reference; TQR keeps the question,
the target, and one reference. TR and TQR take the first positive
reference when one exists, otherwise the first negative with its
Neg_Ref tag (that data flow realizes the negative-only single-reference
setup); with both pools empty they fail.

Every input segment is whitespace-normalized (runs collapsed, ends
trimmed) before insertion so golden strings are reproducible bytewise.

Length control counts whitespace-delimited units of the serialized
string. When the count exceeds max_units, references are dropped whole,
last-added first (negatives from the end, then positives from the end);
the question and target are never dropped. `truncated` reports whether
any reference was dropped; a reference-free string over budget is
returned intact with truncated=False.
"""

from __future__ import annotations

from dataclasses import dataclass

SQUARE = "SQUARE"
QT = "QT"
TR = "TR"
TQR = "TQR"

QUESTION_TAG = "Question:"
TARGET_TAG = "Target:"
POS_TAG = "Pos_Ref:"
NEG_TAG = "Neg_Ref:"
ALL_TAGS = (QUESTION_TAG, TARGET_TAG, POS_TAG, NEG_TAG)

DEFAULT_MAX_UNITS = 512


class EncodingError(ValueError):
    """Inputs do not satisfy the variant's field requirements."""


def normalize_segment(s: str) -> str:
    """Collapse whitespace runs and trim; case is preserved."""
    return " ".join(s.split())


@dataclass(frozen=True)
class EncodingVariant:
    """Which fields a variant consumes; max_refs_used None = unbounded."""

    name: str
    uses_question: bool
    uses_target: bool
    max_refs_used: int | None

    def __post_init__(self):
        if self.name not in (SQUARE, QT, TR, TQR):
            raise EncodingError(f"unknown variant name {self.name!r}")
        if not self.uses_target:
            raise EncodingError("every variant uses the target")
        if self.name == QT and self.max_refs_used != 0:
            raise EncodingError("QT uses no references")
        if self.name == TR and self.uses_question:
            raise EncodingError("TR does not use the question")
        if self.name in (TQR, SQUARE) and not self.uses_question:
            raise EncodingError(f"{self.name} uses the question")


VARIANTS = {
    SQUARE: EncodingVariant(SQUARE, uses_question=True, uses_target=True, max_refs_used=None),
    QT: EncodingVariant(QT, uses_question=True, uses_target=True, max_refs_used=0),
    TR: EncodingVariant(TR, uses_question=False, uses_target=True, max_refs_used=1),
    TQR: EncodingVariant(TQR, uses_question=True, uses_target=True, max_refs_used=1),
}


@dataclass(frozen=True)
class EncodedInput:
    """One serialized scoring input.

    tag_collision flags inputs that themselves contained one of the
    grammar's tag literals; such strings encode fine but cannot be
    parsed back unambiguously.
    """

    text: str
    variant: EncodingVariant
    truncated: bool
    tag_collision: bool = False


def unit_count(text: str) -> int:
    """Whitespace-delimited length used for the truncation budget."""
    return len(text.split())


def encode(
    q: str,
    a: str,
    pos: list[str],
    neg: list[str],
    variant: EncodingVariant | str,
    max_units: int | None = DEFAULT_MAX_UNITS,
    example_id: str | None = None,
) -> EncodedInput:
    """Serialize one example under the given variant's grammar."""
    if isinstance(variant, str):
        try:
            variant = VARIANTS[variant]
        except KeyError:
            raise EncodingError(f"unknown variant name {variant!r}") from None
    if max_units is not None and max_units < 1:
        raise EncodingError(f"max_units must be positive or None, got {max_units}")

    where = f" (example {example_id})" if example_id else ""
    q_norm = normalize_segment(q)
    a_norm = normalize_segment(a)
    pos_norm = [normalize_segment(t) for t in pos]
    neg_norm = [normalize_segment(t) for t in neg]
    if not a_norm:
        raise EncodingError(f"target answer is empty{where}")
    if variant.uses_question and not q_norm:
        raise EncodingError(f"{variant.name} requires a question{where}")

    if variant.name == QT:
        use_pos, use_neg = [], []
    elif variant.name in (TR, TQR):
        if pos_norm:
            use_pos, use_neg = pos_norm[:1], []
        elif neg_norm:
            use_pos, use_neg = [], neg_norm[:1]
        else:
            raise EncodingError(f"{variant.name} requires at least one reference{where}")
    else:
        use_pos, use_neg = pos_norm, neg_norm

    def build(n_pos: int, n_neg: int) -> str:
        parts = []
        if variant.uses_question:
            parts.append(f"{QUESTION_TAG} {q_norm}")
        parts.append(f"{TARGET_TAG} {a_norm}")
        parts.extend(f"{POS_TAG} {t}" for t in use_pos[:n_pos])
        parts.extend(f"{NEG_TAG} {t}" for t in use_neg[:n_neg])
        return " ".join(parts)

    n_pos, n_neg = len(use_pos), len(use_neg)
    text = build(n_pos, n_neg)
    truncated = False
    if max_units is not None:
        while unit_count(text) > max_units and n_pos + n_neg > 0:
            if n_neg > 0:
                n_neg -= 1
            else:
                n_pos -= 1
            truncated = True
            text = build(n_pos, n_neg)

    collision = any(tag in seg for tag in ALL_TAGS for seg in (q_norm, a_norm, *pos_norm, *neg_norm))
    return EncodedInput(text=text, variant=variant, truncated=truncated, tag_collision=collision)
