"""Data model and loaders for sentence-level QA evaluation examples.

The canonical on-disk form is JSONL, one example per line, UTF-8, LF
line endings:

    {"example_id": str, "question": str, "target_answer": str,
     "label": 0|1, "pos_refs": [str, ...], "neg_refs": [str, ...],
     "dataset_name": str, "split": "train"|"dev"|"test"}

Reference answers are stored as plain strings; their polarity is implied
by the field they live in. Loading is strict about line-level JSON (a
malformed line is a hard error with its line number) but lenient about
record content: a record that violates an invariant is rejected
individually and reported, because real annotation dumps are dirty.

Loaded Dataset values are treated as immutable and are safe to share
across threads.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

POSITIVE = "positive"
NEGATIVE = "negative"
SPLITS = ("train", "dev", "test")

AS2_FORMATS = ("wikiqa_tsv", "trecqa")


class DataError(Exception):
    """Unreadable or structurally invalid dataset file."""


class JsonlFormatError(DataError):
    """A JSONL line that is not a standalone JSON object."""


class UnknownFormatError(ValueError):
    """Format tag not recognized by an adapter."""


class InvalidRecord(ValueError):
    """A record that violates the data-model invariants."""


def normalize_text(s: str) -> str:
    """Lowercase and collapse whitespace; used only for the leakage check."""
    return " ".join(s.lower().split())


@dataclass(frozen=True)
class Reference:
    """One reference answer sentence with its polarity."""

    text: str
    polarity: str

    def __post_init__(self):
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise InvalidRecord(f"polarity must be positive or negative, got {self.polarity!r}")
        if not isinstance(self.text, str) or not self.text.strip():
            raise InvalidRecord("reference text is empty")


@dataclass(frozen=True)
class QAExample:
    """One question, the answer under evaluation, its gold label, and
    the reference pools available for scoring it.

    The target answer must not reappear verbatim in either reference
    pool (compared after lowercasing and whitespace collapse); that
    would leak the gold answer into the scoring context.
    """

    example_id: str
    question: str
    target_answer: str
    label: int
    pos_refs: tuple[Reference, ...] = ()
    neg_refs: tuple[Reference, ...] = ()
    dataset_name: str = ""
    split: str = "test"

    def __post_init__(self):
        object.__setattr__(self, "pos_refs", tuple(self.pos_refs))
        object.__setattr__(self, "neg_refs", tuple(self.neg_refs))
        if not isinstance(self.example_id, str) or not self.example_id:
            raise InvalidRecord("example_id is empty")
        if not isinstance(self.question, str) or not self.question.strip():
            raise InvalidRecord("question is empty")
        if not isinstance(self.target_answer, str) or not self.target_answer.strip():
            raise InvalidRecord("target_answer is empty")
        if isinstance(self.label, bool) or self.label not in (0, 1):
            raise InvalidRecord(f"label must be 0 or 1, got {self.label!r}")
        if self.split not in SPLITS:
            raise InvalidRecord(f"split must be one of {SPLITS}, got {self.split!r}")
        for r in self.pos_refs:
            if r.polarity != POSITIVE:
                raise InvalidRecord("pos_refs contains a non-positive reference")
        for r in self.neg_refs:
            if r.polarity != NEGATIVE:
                raise InvalidRecord("neg_refs contains a non-negative reference")
        target = normalize_text(self.target_answer)
        for r in (*self.pos_refs, *self.neg_refs):
            if normalize_text(r.text) == target:
                raise InvalidRecord("target answer appears verbatim in the reference pool")


@dataclass(frozen=True)
class AnnotationRecord:
    """Independent binary annotator judgments for one example."""

    example_id: str
    votes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "votes", tuple(self.votes))
        if not self.votes:
            raise InvalidRecord("votes is empty")
        for v in self.votes:
            if isinstance(v, bool) or v not in (0, 1):
                raise InvalidRecord(f"votes must all be 0 or 1, got {v!r}")


@dataclass(frozen=True)
class Dataset:
    """A named collection of examples plus free-form provenance metadata.

    Provenance records how the dataset was produced (source path,
    adapter, rejected records) and is not part of dataset identity:
    equality and fingerprints consider name and examples only.
    """

    name: str
    examples: tuple[QAExample, ...] = ()
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        ids = [ex.example_id for ex in self.examples]
        if len(set(ids)) != len(ids):
            dupes = sorted(k for k, n in Counter(ids).items() if n > 1)
            raise InvalidRecord(f"duplicate example_ids: {', '.join(dupes[:5])}")

    def __len__(self):
        return len(self.examples)

    def subset(self, split: str) -> "Dataset":
        """Examples belonging to one split, provenance carried over."""
        if split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
        kept = tuple(ex for ex in self.examples if ex.split == split)
        prov = dict(self.provenance)
        prov["split_filter"] = split
        return Dataset(self.name, kept, prov)


_RECORD_FIELDS = (
    "example_id",
    "question",
    "target_answer",
    "label",
    "pos_refs",
    "neg_refs",
    "dataset_name",
    "split",
)


def example_to_record(ex: QAExample) -> dict:
    return {
        "example_id": ex.example_id,
        "question": ex.question,
        "target_answer": ex.target_answer,
        "label": ex.label,
        "pos_refs": [r.text for r in ex.pos_refs],
        "neg_refs": [r.text for r in ex.neg_refs],
        "dataset_name": ex.dataset_name,
        "split": ex.split,
    }


def example_from_record(obj) -> QAExample:
    """Build a QAExample from one parsed JSONL record, strictly."""
    if not isinstance(obj, dict):
        raise InvalidRecord("record is not a JSON object")
    missing = [k for k in _RECORD_FIELDS if k not in obj]
    if missing:
        raise InvalidRecord(f"missing fields: {', '.join(missing)}")
    extra = sorted(set(obj) - set(_RECORD_FIELDS))
    if extra:
        raise InvalidRecord(f"unexpected fields: {', '.join(extra)}")
    for key in ("example_id", "question", "target_answer", "dataset_name", "split"):
        if not isinstance(obj[key], str):
            raise InvalidRecord(f"{key} must be a string")
    for key in ("pos_refs", "neg_refs"):
        if not isinstance(obj[key], list) or not all(isinstance(t, str) for t in obj[key]):
            raise InvalidRecord(f"{key} must be a list of strings")
    label = obj["label"]
    if isinstance(label, bool) or not isinstance(label, int):
        raise InvalidRecord(f"label must be an integer, got {label!r}")
    return QAExample(
        example_id=obj["example_id"],
        question=obj["question"],
        target_answer=obj["target_answer"],
        label=label,
        pos_refs=tuple(Reference(t, POSITIVE) for t in obj["pos_refs"]),
        neg_refs=tuple(Reference(t, NEGATIVE) for t in obj["neg_refs"]),
        dataset_name=obj["dataset_name"],
        split=obj["split"],
    )


def serialize_example(ex: QAExample) -> str:
    return json.dumps(example_to_record(ex), ensure_ascii=False)


def serialize_dataset(ds: Dataset) -> str:
    """Canonical JSONL text for a dataset (one LF-terminated line each)."""
    return "".join(serialize_example(ex) + "\n" for ex in ds.examples)


def save_jsonl(ds: Dataset, path) -> None:
    Path(path).write_text(serialize_dataset(ds), encoding="utf-8", newline="\n")


def dataset_fingerprint(ds: Dataset) -> str:
    """Stable hex digest of a dataset's identity (name plus examples).

    Provenance is deliberately left out so that the same data loaded
    from two paths fingerprints identically.
    """
    h = hashlib.sha256()
    h.update(ds.name.encode("utf-8"))
    h.update(b"\x00")
    h.update(serialize_dataset(ds).encode("utf-8"))
    return h.hexdigest()


def load_jsonl(path) -> Dataset:
    """Load a canonical JSONL file.

    Malformed JSON on any line raises JsonlFormatError naming the line.
    Records that parse but violate an invariant are rejected one by one;
    the rejects (line number and reason) end up in provenance["rejects"].
    """
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such dataset file: {p}")
    examples: list[QAExample] = []
    rejects: list[dict] = []
    seen: set[str] = set()
    with open(p, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                raise JsonlFormatError(f"{p}:{lineno}: blank line is not a JSON object")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise JsonlFormatError(f"{p}:{lineno}: {err.msg}") from err
            try:
                ex = example_from_record(obj)
            except InvalidRecord as err:
                rejects.append({"line": lineno, "reason": str(err)})
                continue
            if ex.example_id in seen:
                rejects.append({"line": lineno, "reason": f"duplicate example_id {ex.example_id!r}"})
                continue
            seen.add(ex.example_id)
            examples.append(ex)
    name = _dominant_name(examples) or p.stem
    provenance = {"source": str(p), "adapter": "load_jsonl", "rejects": rejects}
    return Dataset(name=name, examples=tuple(examples), provenance=provenance)


def _dominant_name(examples) -> str:
    names = Counter(ex.dataset_name for ex in examples if ex.dataset_name)
    return names.most_common(1)[0][0] if names else ""


def adapt_as2_table(path, format: str, dataset_name: str | None = None, split: str = "test") -> Dataset:
    """Turn an answer-sentence-selection table into canonical examples.

    Input is a tab-separated file with a header row naming (at least)
    question, sentence, and label columns; extra columns are ignored.
    Rows are grouped by question and each candidate becomes one example
    whose target is that candidate; the reference pools are the OTHER
    candidates of the same question, partitioned by their labels. Any
    other candidate whose normalized text equals the target is excluded
    from the pools (leakage guard).

    wikiqa_tsv additionally groups on a questionid column when present,
    which matches the column layout of the published WikiQA corpus;
    trecqa groups on the question text itself.
    """
    if format not in AS2_FORMATS:
        raise UnknownFormatError(f"unknown format {format!r}; expected one of {AS2_FORMATS}")
    if split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such table file: {p}")
    name = dataset_name or p.stem

    with open(p, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return Dataset(name, (), {"source": str(p), "adapter": format, "rejects": []})

    header = [h.strip().lower() for h in lines[0].split("\t")]
    col: dict[str, int] = {}
    for want in ("question", "sentence", "label"):
        if want not in header:
            raise DataError(f"{p}: header is missing a {want!r} column")
        col[want] = header.index(want)
    group_col = header.index("questionid") if format == "wikiqa_tsv" and "questionid" in header else None

    # (group key -> list of (row_index, sentence, label)); insertion-ordered
    groups: dict[str, list[tuple[int, str, int]]] = {}
    questions: dict[str, str] = {}
    rejects: list[dict] = []
    n_rows = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        n_rows += 1
        cells = raw.split("\t")
        needed = max(col.values()) if group_col is None else max(max(col.values()), group_col)
        if len(cells) <= needed:
            rejects.append({"line": lineno, "reason": "row has missing columns"})
            continue
        question = cells[col["question"]].strip()
        sentence = cells[col["sentence"]].strip()
        label_text = cells[col["label"]].strip()
        if not question or not sentence:
            rejects.append({"line": lineno, "reason": "empty question or sentence"})
            continue
        if label_text not in ("0", "1"):
            rejects.append({"line": lineno, "reason": f"label must be 0 or 1, got {label_text!r}"})
            continue
        key = cells[group_col].strip() if group_col is not None else question
        groups.setdefault(key, []).append((lineno, sentence, int(label_text)))
        questions.setdefault(key, question)

    examples: list[QAExample] = []
    for qi, (key, rows) in enumerate(groups.items()):
        for ci, (lineno, sentence, label) in enumerate(rows):
            target_norm = normalize_text(sentence)
            pos, neg = [], []
            for cj, (_, other, other_label) in enumerate(rows):
                if cj == ci or normalize_text(other) == target_norm:
                    continue
                if other_label == 1:
                    pos.append(Reference(other, POSITIVE))
                else:
                    neg.append(Reference(other, NEGATIVE))
            try:
                examples.append(
                    QAExample(
                        example_id=f"{name}-q{qi}-s{ci}",
                        question=questions[key],
                        target_answer=sentence,
                        label=label,
                        pos_refs=tuple(pos),
                        neg_refs=tuple(neg),
                        dataset_name=name,
                        split=split,
                    )
                )
            except InvalidRecord as err:
                rejects.append({"line": lineno, "reason": str(err)})
    assert len(examples) + len(rejects) == n_rows
    provenance = {"source": str(p), "adapter": format, "rejects": rejects}
    return Dataset(name, tuple(examples), provenance)


def filter_clean_setting(ds: Dataset) -> Dataset:
    """Keep only examples whose question has at least one positive and one
    negative candidate, counting the example's own label alongside its
    reference pools."""
    kept = tuple(
        ex
        for ex in ds.examples
        if (ex.label == 1 or ex.pos_refs) and (ex.label == 0 or ex.neg_refs)
    )
    prov = dict(ds.provenance)
    prov["clean_setting"] = {"kept": len(kept), "dropped": len(ds.examples) - len(kept)}
    return Dataset(ds.name, kept, prov)


def majority_vote(record: AnnotationRecord) -> int:
    """Aggregate annotator votes: 1 only on a strict majority of 1s.

    Even splits resolve to 0; an answer is not credited as correct
    unless most annotators said so.
    """
    return int(2 * sum(record.votes) > len(record.votes))
