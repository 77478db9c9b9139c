from __future__ import annotations

from pathlib import Path

import pytest

from lexishot.lexicon import load_lexicon

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def marked_terms_lexicon():
    """The lexicon marking the top-contributing words of the four countries."""
    text = (DATA_DIR / "wordlists" / "marked_terms.tsv").read_text(encoding="utf-8")
    return load_lexicon(text)


@pytest.fixture(scope="session")
def german_lexicon():
    rows = [
        "Flüchtling\tGermany\tde\tTarget\trefugee",
        "Schwule\tGermany\tde\tTarget|Slur\tself-designation and slur",
        "Schwuchteln\tGermany\tde\tSlur\tderogatory term for homosexuals",
        "Goldstücke\tGermany\tde\tNeutral|Slur\tappropriated term",
        "Frauenquote\tGermany\tde\tNeutral\tquota of/for women",
    ]
    return load_lexicon("\n".join(rows) + "\n")


def read_wordlist(name: str) -> list[str]:
    text = (DATA_DIR / "wordlists" / name).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]
