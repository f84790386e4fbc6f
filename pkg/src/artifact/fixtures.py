"""Paths to the small bundled data files (flavor and commonsense graphs, a
synthetic embedding table, stopword lists)."""
from importlib import resources
from pathlib import Path

FLAVOR = "flavor.tsv"
COMMONSENSE = "commonsense.tsv"
EMBEDDINGS = "embeddings_synthetic.txt"
STOPWORDS_EN = "stopwords_en.txt"
STOPWORDS_HI = "stopwords_hi.txt"

SPICE_ARTIFACT = ("thyme", "clove", "tangerine_peel_oil", "french_lavender", "lavender_flower")
ROUTINE_SENTENCE = (
    "After hearing the music, I woke up in the morning and opened my eyes, "
    "after which I had breakfast at the kitchen table"
)
HINDI_SENTENCE = "पुराना भारतीय सरकार अन्य अंतर्राष्ट्रीय सरकार के उल्लंघन का कारण है"


def path(name: str) -> Path:
    return Path(str(resources.files("artifact") / "data" / name))
