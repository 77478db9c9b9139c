"""Deterministic fixture builders shared by the unit and acceptance suites."""

from __future__ import annotations

import random

from lexishot.corpus import Example
from lexishot.lexicon import Lexicon, LexiconTerm, TermType, load_lexicon

# Reference per-country counts for each type combination, and the totals the
# source material declares for them (three of which disagree with the rows).
REFERENCE_COMBO_COUNTS = {
    "Brazil": {"Neutral": 30, "Target": 4, "Slur": 11, "Neutral/Target": 0, "Neutral/Slur": 0, "Target/Slur": 0},
    "Germany": {"Neutral": 4, "Target": 3, "Slur": 18, "Neutral/Target": 1, "Neutral/Slur": 18, "Target/Slur": 5},
    "India": {"Neutral": 3, "Target": 7, "Slur": 35, "Neutral/Target": 0, "Neutral/Slur": 1, "Target/Slur": 0},
    "Kenya": {"Neutral": 21, "Target": 29, "Slur": 43, "Neutral/Target": 2, "Neutral/Slur": 6, "Target/Slur": 12},
}
DECLARED_TOTALS = {"Brazil": 45, "Germany": 50, "India": 50, "Kenya": 116}
COUNTRY_LANGUAGE = {"Brazil": "pt-BR", "Germany": "de", "India": "hi", "Kenya": "sw"}


def reference_counts_tsv() -> str:
    """A synthetic lexicon whose per-combination counts equal the reference."""
    lines = []
    for country, combos in REFERENCE_COMBO_COUNTS.items():
        language = COUNTRY_LANGUAGE[country]
        for combo, count in combos.items():
            slug = combo.lower().replace("/", "")
            types = combo.replace("/", "|")
            for i in range(count):
                surface = f"{country[:2].lower()}{slug}{i:03d}"
                lines.append(f"{surface}\t{country}\t{language}\t{types}\tsynthetic")
    return "\n".join(lines) + "\n"


def _spelled(n: int) -> str:
    words = ["शून्य", "एक", "दो", "तीन", "चार", "पाँच", "छह", "सात", "आठ", "नौ", "दस", "ग्यारह", "बारह"]
    return words[n]


def distribution_fixture(language: str):
    """A 128-example pool shaped like the study's training pools.

    German: 12 distinct slur and 10 distinct target terms spread over 22
    bearing examples. Hindi: 12 slurs and 9 targets over 21 bearing examples.
    Everything else is filler with no lexicon hits.
    """
    if language == "de":
        country, n_slur, n_target = "Germany", 12, 10
        slurs = [f"schmähwort{i:02d}" for i in range(1, n_slur + 1)]
        targets = [f"volksgruppe{i:02d}" for i in range(1, n_target + 1)]
        fillers = [f"wort{i:02d}" for i in range(1, 41)] + ["die", "debatte", "über", "und"]
    elif language == "hi":
        country, n_slur, n_target = "India", 12, 9
        slurs = [f"गाली{_spelled(i)}" for i in range(1, n_slur + 1)]
        targets = [f"समूह{_spelled(i)}" for i in range(1, n_target + 1)]
        fillers = [f"शब्द{_spelled(i)}" for i in range(1, 11)] + ["और", "में", "है", "नहीं"]
    else:
        raise ValueError(language)
    terms = [
        LexiconTerm(s, country, language, frozenset({TermType.SLUR})) for s in slurs
    ] + [
        LexiconTerm(t, country, language, frozenset({TermType.TARGET})) for t in targets
    ]
    lexicon = Lexicon.from_terms(terms)
    rng = random.Random(97)
    pool = []
    bearing = slurs + targets
    for i in range(1, 129):
        idx = i - 1
        parts = [rng.choice(fillers) for _ in range(4)]
        if idx < len(bearing):
            parts.insert(rng.randrange(len(parts) + 1), bearing[idx])
        label = "HOF" if idx < len(bearing) or idx % 3 == 0 else "NOT"
        pool.append(Example(f"e{i:03d}", label, language, " ".join(parts)))
    return pool, lexicon, len(bearing)


# 50 terms mixing Latin and Devanagari scripts, single- and multi-word.
_MATCH_TERMS = [
    # German (10)
    ("Flüchtling", "Germany", "de", "Target"),
    ("Schwuchteln", "Germany", "de", "Slur"),
    ("Goldstücke", "Germany", "de", "Neutral|Slur"),
    ("Größe", "Germany", "de", "Neutral"),
    ("Straße", "Germany", "de", "Neutral"),
    ("Mohammedaner", "Germany", "de", "Target|Slur"),
    ("Juden", "Germany", "de", "Target"),
    ("Moslems", "Germany", "de", "Target"),
    ("Umvolkung", "Germany", "de", "Neutral|Slur"),
    ("Gutmensch", "Germany", "de", "Slur"),
    # Portuguese (8)
    ("gorda", "Brazil", "pt-BR", "Slur"),
    ("traveco", "Brazil", "pt-BR", "Slur"),
    ("hora", "Brazil", "pt-BR", "Neutral"),
    ("viado", "Brazil", "pt-BR", "Slur"),
    ("macaco", "Brazil", "pt-BR", "Slur"),
    ("safada", "Brazil", "pt-BR", "Slur"),
    ("vagabundo", "Brazil", "pt-BR", "Slur"),
    ("ucranizar", "Brazil", "pt-BR", "Slur"),
    # Swahili (6)
    ("nugu", "Kenya", "sw", "Slur"),
    ("wakalee", "Kenya", "sw", "Target"),
    ("madoadoa", "Kenya", "sw", "Slur"),
    ("kafiri", "Kenya", "sw", "Slur"),
    ("wajinga", "Kenya", "sw", "Slur"),
    ("tangatanga", "Kenya", "sw", "Target"),
    # English (6)
    ("peaceful", "India", "en", "Slur"),
    ("foreskin", "Kenya", "en", "Slur"),
    ("cows", "India", "en", "Neutral"),
    ("looting", "Kenya", "en", "Neutral"),
    ("mullo", "India", "en", "Slur"),
    ("suvar", "India", "en", "Slur"),
    # Devanagari (12)
    ("मुसलमान", "India", "hi", "Target"),
    ("हिंदू", "India", "hi", "Target"),
    ("दलित", "India", "hi", "Target"),
    ("कश्मीरी", "India", "hi", "Target"),
    ("पाकिस्तानी", "India", "hi", "Target|Slur"),
    ("भिमटे", "India", "hi", "Slur"),
    ("मुल्ला", "India", "hi", "Slur"),
    ("सुवर", "India", "hi", "Slur"),
    ("रोहिंग्या", "India", "hi", "Target"),
    ("जिहादी", "India", "hi", "Slur"),
    ("धर्म", "India", "hi", "Neutral"),
    ("काफ़िर", "India", "hi", "Slur"),
    # Multi-word (8)
    ("gente de bem", "Brazil", "pt-BR", "Neutral"),
    ("cidadão de bem", "Brazil", "pt-BR", "Neutral"),
    ("quota für frauen", "Germany", "de", "Neutral"),
    ("heim ins reich", "Germany", "de", "Slur"),
    ("go back", "Kenya", "en", "Neutral"),
    ("enemy of the people", "India", "en", "Neutral"),
    ("दलित समाज", "India", "hi", "Target"),
    ("देश के गद्दार", "India", "hi", "Slur"),
]


def match_fixture_lexicon() -> Lexicon:
    """The 50-term matching fixture (Latin + Devanagari, multi-word entries)."""
    assert len(_MATCH_TERMS) == 50
    rows = [
        f"{surface}\t{country}\t{language}\t{types}\tfixture"
        for surface, country, language, types in _MATCH_TERMS
    ]
    return load_lexicon("\n".join(rows) + "\n")


# Near-miss forms that must NOT match (suffixes, merges) plus neutral filler.
_DECOYS = [
    "horas", "gordas", "Flüchtlinge", "peacefully", "wakale", "nugus",
    "मुसलमानों", "दलितों", "suvarna", "mulloh", "größer", "cowsheds",
]
_FILLERS = [
    "die", "und", "ist", "uma", "para", "chegando", "kwa", "sana", "और",
    "में", "the", "of", "debatte", "gente", "bem", "quota", "frauen",
    "समाज", "go", "back", "heim", "reich", "people", "enemy", "देश",
]
_SEPARATORS = [" ", " ", " ", "  ", ", ", ". ", "! ", " - ", "\t", "\n", "। ", "@", "#", ""]
_INNER_SEPARATORS = [" ", " ", ", ", "  ", " - "]
_CASES = [str.lower, str.upper, str.title, lambda s: s]


def random_document(rng: random.Random) -> str:
    """A synthetic document over the fixture vocabulary with noisy casing,
    separators and occasional whole multi-word surfaces."""
    surfaces = [t[0] for t in _MATCH_TERMS]
    single_words = [s for s in surfaces if " " not in s]
    pieces = []
    for _ in range(rng.randrange(3, 20)):
        roll = rng.random()
        if roll < 0.35:
            token = rng.choice(single_words)
        elif roll < 0.45:
            multi = rng.choice([s for s in surfaces if " " in s])
            words = [rng.choice(_CASES)(w) for w in multi.split(" ")]
            token = rng.choice(_INNER_SEPARATORS).join(words)
            pieces.append(token)
            pieces.append(rng.choice(_SEPARATORS))
            continue
        elif roll < 0.65:
            token = rng.choice(_DECOYS)
        else:
            token = rng.choice(_FILLERS)
        pieces.append(rng.choice(_CASES)(token))
        pieces.append(rng.choice(_SEPARATORS))
    return "".join(pieces)


def make_pool(
    n: int,
    bearing_texts: dict[int, str],
    language: str = "de",
    prefix: str = "x",
) -> list[Example]:
    """A pool of ``n`` examples; positions in ``bearing_texts`` get that text,
    the rest get filler that matches nothing."""
    pool = []
    for i in range(n):
        text = bearing_texts.get(i, f"filler filler{i:03d} nichts")
        label = "HOF" if i % 2 == 0 else "NOT"
        pool.append(Example(f"{prefix}{i:03d}", label, language, text))
    return pool
