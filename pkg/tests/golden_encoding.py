"""Hand-built golden cases for the serialized input grammar.

Each expected string was written out by hand from the grammar
("Question: " q " Target: " a {" Pos_Ref: " ref} {" Neg_Ref: " ref})
and unit counts were tallied manually for the truncation cases, so
these act as an oracle independent of the encoder implementation.
Shared between the unit tests and the acceptance suite.
"""

HAMLET_Q = "Who wrote Hamlet?"
HAMLET_A = "Shakespeare did."
HAMLET_POS = "Hamlet is by Shakespeare."
HAMLET_NEG = "Hamlet is a village."

GOLDEN_CASES = [
    {
        "id": "square-one-pos-one-neg",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "SQUARE",
        "max_units": None,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare. Neg_Ref: Hamlet is a village."
        ),
        "truncated": False,
    },
    {
        "id": "qt-drops-references",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "QT",
        "max_units": None,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did.",
        "truncated": False,
    },
    {
        "id": "tr-drops-question",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "TR",
        "max_units": None,
        "text": "Target: Shakespeare did. Pos_Ref: Hamlet is by Shakespeare.",
        "truncated": False,
    },
    {
        "id": "tqr-single-reference",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "TQR",
        "max_units": None,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare."
        ),
        "truncated": False,
    },
    {
        "id": "tqr-negative-only-pool",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [],
        "neg": [HAMLET_NEG],
        "variant": "TQR",
        "max_units": None,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Neg_Ref: Hamlet is a village."
        ),
        "truncated": False,
    },
    {
        "id": "square-positive-only-pool",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS, "The Bard wrote Hamlet."],
        "neg": [],
        "variant": "SQUARE",
        "max_units": None,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare. Pos_Ref: The Bard wrote Hamlet."
        ),
        "truncated": False,
    },
    {
        "id": "square-empty-pools",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [],
        "neg": [],
        "variant": "SQUARE",
        "max_units": None,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did.",
        "truncated": False,
    },
    {
        "id": "square-order-preserved",
        "q": "What is water?",
        "a": "Water is H2O.",
        "pos": ["Water is a molecule.", "Water covers Earth."],
        "neg": ["Water is dry.", "Water is metal."],
        "variant": "SQUARE",
        "max_units": None,
        "text": (
            "Question: What is water? Target: Water is H2O. "
            "Pos_Ref: Water is a molecule. Pos_Ref: Water covers Earth. "
            "Neg_Ref: Water is dry. Neg_Ref: Water is metal."
        ),
        "truncated": False,
    },
    {
        "id": "whitespace-normalized",
        "q": "  Who   wrote\tHamlet? ",
        "a": " Shakespeare\n did. ",
        "pos": ["  Hamlet   is by Shakespeare. "],
        "neg": [],
        "variant": "SQUARE",
        "max_units": None,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare."
        ),
        "truncated": False,
    },
    {
        "id": "unicode-passthrough",
        "q": "Qui a écrit «Hamlet»?",
        "a": "C'était Shakespeare.",
        "pos": [],
        "neg": [],
        "variant": "QT",
        "max_units": None,
        "text": "Question: Qui a écrit «Hamlet»? Target: C'était Shakespeare.",
        "truncated": False,
    },
    {
        # full string is 17 units; budget 12 forces the negative out
        "id": "truncate-drops-last-negative-first",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "SQUARE",
        "max_units": 12,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare."
        ),
        "truncated": True,
    },
    {
        # budget 8 forces both references out (12 units after the first drop)
        "id": "truncate-drops-both-references",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "SQUARE",
        "max_units": 8,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did.",
        "truncated": True,
    },
    {
        # question and target survive even when they alone exceed the budget
        "id": "truncate-never-drops-question-or-target",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "SQUARE",
        "max_units": 5,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did.",
        "truncated": True,
    },
    {
        # nothing droppable: over-budget QT comes back intact, not truncated
        "id": "qt-over-budget-intact",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [],
        "neg": [],
        "variant": "QT",
        "max_units": 3,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did.",
        "truncated": False,
    },
    {
        # 13 units; budget 10 drops the last positive
        "id": "truncate-positive-tail",
        "q": "Who?",
        "a": "Me.",
        "pos": ["Alpha one.", "Beta two.", "Gamma three."],
        "neg": [],
        "variant": "SQUARE",
        "max_units": 10,
        "text": "Question: Who? Target: Me. Pos_Ref: Alpha one. Pos_Ref: Beta two.",
        "truncated": True,
    },
    {
        # 13 units; the negative goes before any positive does
        "id": "truncate-negative-before-positive",
        "q": "Who?",
        "a": "Me.",
        "pos": ["Alpha one."],
        "neg": ["Nope one.", "Nope two."],
        "variant": "SQUARE",
        "max_units": 10,
        "text": "Question: Who? Target: Me. Pos_Ref: Alpha one. Neg_Ref: Nope one.",
        "truncated": True,
    },
    {
        "id": "tr-negative-fallback",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [],
        "neg": [HAMLET_NEG],
        "variant": "TR",
        "max_units": None,
        "text": "Target: Shakespeare did. Neg_Ref: Hamlet is a village.",
        "truncated": False,
    },
    {
        "id": "tag-literal-in-input-is-flagged",
        "q": "What is six times seven?",
        "a": "It equals Target: 42",
        "pos": [],
        "neg": [],
        "variant": "QT",
        "max_units": None,
        "text": "Question: What is six times seven? Target: It equals Target: 42",
        "truncated": False,
        "tag_collision": True,
    },
    {
        "id": "tqr-uses-first-positive-only",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": ["First ref here.", "Second ref here."],
        "neg": [],
        "variant": "TQR",
        "max_units": None,
        "text": "Question: Who wrote Hamlet? Target: Shakespeare did. Pos_Ref: First ref here.",
        "truncated": False,
    },
    {
        # budget equals the exact unit count: no truncation
        "id": "budget-boundary-exact-fit",
        "q": HAMLET_Q,
        "a": HAMLET_A,
        "pos": [HAMLET_POS],
        "neg": [HAMLET_NEG],
        "variant": "SQUARE",
        "max_units": 17,
        "text": (
            "Question: Who wrote Hamlet? Target: Shakespeare did. "
            "Pos_Ref: Hamlet is by Shakespeare. Neg_Ref: Hamlet is a village."
        ),
        "truncated": False,
    },
]

assert len(GOLDEN_CASES) == 20
assert len({c["id"] for c in GOLDEN_CASES}) == 20
