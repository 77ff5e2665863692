"""Published figures used as expected values, transcribed by hand.

Kept apart from the shipped fixture CSV so the tests compare two
independent transcriptions.
"""

# circumstance -> (score, oracle, predicted, correct)
STRATEGY_TABLE = {
    "argument": (5, "C", "C", True),
    "depressed-mood": (5, "C", "C", True),
    "living-situation-change": (4, "C", "C", True),
    "disaster-exposure": (4, "C", "C", True),
    "other-relationship-problem": (4, "C", "C", True),
    "death-of-friend-family": (4, "C", "C", True),
    "family-relationship-problem": (4, "C", "C", True),
    "household-substance-abuse": (3, "C", "C", True),
    "abuse-or-neglect": (3, "C", "C", True),
    "childhood-abuse-history": (3, "S", "C", False),
    "other-addiction": (2, "S", "S", True),
    "family-stressor": (2, "C", "S", False),
    "suicide-of-friend-family": (2, "S", "S", True),
    "criminal-legal-problem": (2, "S", "S", True),
    "caregiver-burden": (1, "S", "S", True),
    "victim-of-violence": (1, "S", "S", True),
    "civil-legal-problem": (1, "S", "S", True),
    "physical-health-problem": (1, "C", "S", False),
    "treatment-non-adherence": (0, "C", "S", False),
    "school-problem": (0, "C", "S", False),
    "job-problem": (0, "C", "S", False),
    "traumatic-anniversary": (-1, "S", "S", True),
    "physical-fight": (-1, "S", "S", True),
    "eviction-or-housing-loss": (-1, "S", "S", True),
    "financial-problem": (-1, "C", "S", False),
}

# (label, n, hybrid wins, baseline wins)
BRACKET_TABLE = [
    ("<500", 4, 4, 0),
    ("500–2,000", 6, 6, 0),
    ("2,000–5,000", 5, 5, 0),
    ("5,000–15,000", 5, 4, 1),
    (">15,000", 5, 2, 3),
]

MACRO_F1 = {
    "f1_complex": 0.883,
    "f1_simple": 0.855,
    "f1_gemini": 0.878,
    "f1_llama": 0.838,
    "f1_roberta": 0.800,
}
HYBRID = 0.893
ORACLE = 0.897
