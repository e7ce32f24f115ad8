"""Demo: serializing question, target, and references into one input.

Walks the four encoding variants over the same example and shows how
truncation drops whole references, last added first, when a unit
budget is exceeded.
"""

from squareval import encode

QUESTION = "Who wrote Hamlet?"
TARGET = "Shakespeare did."
POS = ["Hamlet is by Shakespeare.", "William Shakespeare wrote it."]
NEG = ["Hamlet is a village in Denmark."]


def main():
    print("variants over the same inputs:\n")
    for variant in ("SQUARE", "QT", "TR", "TQR"):
        out = encode(QUESTION, TARGET, POS, NEG, variant)
        print(f"  {variant}:")
        print(f"    {out.text}")

    print("\npolarity-restricted techniques reuse the same grammar;")
    print("a negative-only TQR input simply has no positives to take:")
    out = encode(QUESTION, TARGET, [], NEG, "TQR")
    print(f"    {out.text}")

    print("\ntruncation drops whole references until the input fits:")
    for budget in (None, 14, 9, 6):
        out = encode(QUESTION, TARGET, POS, NEG, "SQUARE", max_units=budget)
        units = len(out.text.split())
        label = "unlimited" if budget is None else f"max {budget}"
        print(f"  {label:>10}: {units:2d} units, truncated={out.truncated}")
        print(f"              {out.text}")


if __name__ == "__main__":
    main()
