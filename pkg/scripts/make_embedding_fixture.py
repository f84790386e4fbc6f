"""Regenerate the synthetic word-vector fixture in src/artifact/data/.

Vectors are seeded random points around a few hand-placed cluster centres so
related words sit close together. Run from the repository root.
"""
import numpy as np

DIM = 8
# token -> (cluster, spread)
TOKENS = {
    "पुराना": ("time", 0.30),  # old
    "भारतीय": ("nation", 0.15),  # Indian
    "अंतर्राष्ट्रीय": ("nation", 0.15),  # international
    "सरकार": ("state", 0.20),  # government
    "अन्य": ("misc", 0.40),  # other
    "उल्लंघन": ("conflict", 0.25),  # violation / unravelling
    "कारण": ("conflict", 0.35),  # cause
    "के": ("function", 0.10),
    "का": ("function", 0.10),
    "है": ("function", 0.10),
    "king": ("state", 0.25),
    "queen": ("state", 0.25),
    "river": ("nature", 0.30),
    "mountain": ("nature", 0.30),
}
CENTRES = {
    "time": [1.0, 0.0, 0.5, 0.0, 0.0, 0.2, 0.0, 0.0],
    "nation": [0.0, 1.2, 0.3, 0.0, 0.4, 0.0, 0.0, 0.0],
    "state": [0.2, 0.9, 0.0, 0.8, 0.0, 0.0, 0.1, 0.0],
    "misc": [0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3],
    "conflict": [0.0, 0.2, 0.0, 0.6, 1.0, 0.0, 0.0, 0.4],
    "function": [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0],
    "nature": [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
}


def main(path="src/artifact/data/embeddings_synthetic.txt"):
    rng = np.random.default_rng(20200716)
    lines = [f"{len(TOKENS)} {DIM}"]
    for token, (cluster, spread) in TOKENS.items():
        v = np.array(CENTRES[cluster]) + rng.normal(0.0, spread, DIM)
        lines.append(token + " " + " ".join(f"{x:.6f}" for x in v))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
