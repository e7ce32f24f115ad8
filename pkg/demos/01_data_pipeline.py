"""Demo: from a raw answer-selection table to a canonical JSONL corpus.

Builds a tiny WikiQA-style TSV, adapts it with leave-one-out reference
pools, applies the clean-setting filter, and round-trips the result
through JSONL.
"""

import tempfile
from pathlib import Path

from squareval import adapt_as2_table, filter_clean_setting, load_jsonl, majority_vote, save_jsonl
from squareval.data import AnnotationRecord

TSV = """QuestionID\tQuestion\tSentence\tLabel
Q1\twho wrote hamlet\tShakespeare wrote Hamlet around 1600.\t1
Q1\twho wrote hamlet\tHamlet is a tragedy in five acts.\t0
Q1\twho wrote hamlet\tThe play was written by William Shakespeare.\t1
Q1\twho wrote hamlet\tElsinore is a castle in Denmark.\t0
Q2\thow tall is everest\tEverest is 8849 meters tall.\t1
Q2\thow tall is everest\tEverest lies in the Himalayas.\t0
"""


def main():
    workdir = Path(tempfile.mkdtemp(prefix="squareval-demo-"))
    table = workdir / "mini.tsv"
    table.write_text(TSV)

    ds = adapt_as2_table(table, "wikiqa_tsv", dataset_name="mini-wiki")
    print(f"adapted {len(ds)} examples from {table.name}")
    for ex in ds.examples:
        print(f"  {ex.example_id}: label={ex.label} "
              f"pos_refs={len(ex.pos_refs)} neg_refs={len(ex.neg_refs)}")
        print(f"    target: {ex.target_answer}")

    # each candidate borrows the OTHER candidates of its question as
    # references, so its own text never leaks into a pool
    first = ds.examples[0]
    print("\nreference pool for the first example:")
    for ref in first.pos_refs + first.neg_refs:
        print(f"  [{ref.polarity}] {ref.text}")

    clean = filter_clean_setting(ds)
    kept = clean.provenance["clean_setting"]
    print(f"\nclean setting: kept {kept['kept']}, dropped {kept['dropped']}")

    path = workdir / "mini.jsonl"
    save_jsonl(clean, path)
    back = load_jsonl(path)
    print(f"round trip through {path.name}: {len(back)} examples, name={back.name!r}")

    votes = AnnotationRecord(example_id=first.example_id, votes=(1, 0, 1))
    print(f"\nmajority vote over {votes.votes} -> label {majority_vote(votes)}")


if __name__ == "__main__":
    main()
