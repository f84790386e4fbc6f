"""Building knowledge graphs from edge lists and embedding tables, plus the
text and projection helpers that go with them."""
from __future__ import annotations

import enum
import math
import unicodedata
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    DuplicateToken,
    NegativeStrength,
    NoComponentsFound,
    NonPositiveStrength,
    ParseError,
    UnknownToken,
)
from .graph import Edge, WeightedGraph


class StrengthTransform(enum.Enum):
    """How a raw association strength becomes an edge weight (distance)."""

    RECIPROCAL = "reciprocal"
    MAX_PLUS_ONE_MINUS = "max-minus"
    IDENTITY_DISTANCE = "distance"

    @classmethod
    def parse(cls, value) -> StrengthTransform:
        if isinstance(value, cls):
            return value
        aliases = {"max_plus_one_minus": cls.MAX_PLUS_ONE_MINUS, "identity_distance": cls.IDENTITY_DISTANCE}
        return aliases.get(value) or cls(value)


def strength_to_weight(s: float, transform=StrengthTransform.RECIPROCAL, s_max: float | None = None) -> float:
    transform = StrengthTransform.parse(transform)
    if not s > 0:
        raise NonPositiveStrength(f"strength must be positive, got {s}")
    if transform is StrengthTransform.RECIPROCAL:
        return 1.0 / s
    if transform is StrengthTransform.MAX_PLUS_ONE_MINUS:
        if s_max is None or s > s_max:
            raise ValueError(f"max-minus needs s <= s_max (s={s}, s_max={s_max})")
        return s_max + 1.0 - s
    return float(s)


def weight_to_strength(w: float, transform=StrengthTransform.RECIPROCAL, s_max: float | None = None) -> float:
    """Inverse of :func:`strength_to_weight`, used when writing edge lists."""
    transform = StrengthTransform.parse(transform)
    if transform is StrengthTransform.RECIPROCAL:
        return 1.0 / w
    if transform is StrengthTransform.MAX_PLUS_ONE_MINUS:
        return s_max + 1.0 - w
    return float(w)


def _edge_rows(source: TextIO):
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3 or len(cols) > 4:
            raise ParseError(line_no, line, "expected 3 or 4 tab-separated columns")
        a, b = cols[0].strip(), cols[1].strip()
        if not a or not b:
            raise ParseError(line_no, line, "empty node name")
        if a == b:
            raise ParseError(line_no, line, "self-loop")
        try:
            s = float(cols[2])
        except ValueError:
            raise ParseError(line_no, line, "strength is not a number") from None
        if not math.isfinite(s):
            raise ParseError(line_no, line, "strength is not finite")
        if s < 0:
            raise NegativeStrength(line_no, line)
        just = cols[3].strip() if len(cols) == 4 and cols[3].strip() else None
        yield line_no, a, b, s, just


def load_edge_list(source: TextIO, transform=StrengthTransform.RECIPROCAL) -> WeightedGraph:
    """Read a TAB-separated ``node_a, node_b, strength[, justification]`` file.

    Direction is ignored, zero strengths add the nodes but no edge, and a pair
    listed twice keeps its smallest resulting weight.
    """
    transform = StrengthTransform.parse(transform)
    rows = list(_edge_rows(source))
    positive = [r[3] for r in rows if r[3] > 0]
    s_max = max(positive) if positive else None
    nodes: set[str] = set()
    best: dict[tuple[str, str], Edge] = {}
    for _, a, b, s, just in rows:
        nodes.update((a, b))
        if s == 0:
            continue
        w = strength_to_weight(s, transform, s_max)
        e = Edge(a, b, w, just)
        prev = best.get(e.key)
        if prev is None or w < prev.weight:
            best[e.key] = e
    return WeightedGraph(nodes, best.values())


def write_edge_list(graph: WeightedGraph, out: TextIO, transform=StrengthTransform.IDENTITY_DISTANCE, s_max=None):
    for e in graph.edges:
        s = weight_to_strength(e.weight, transform, s_max)
        cols = [e.u, e.v, repr(s)]
        if e.justification:
            cols.append(e.justification)
        out.write("\t".join(cols) + "\n")


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    entries: dict[str, np.ndarray]

    def __contains__(self, token):
        return token in self.entries

    def __len__(self):
        return len(self.entries)

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.entries[token]
        except KeyError:
            raise UnknownToken(token) from None

    @property
    def tokens(self) -> list[str]:
        return list(self.entries)


def load_embeddings(source: TextIO) -> EmbeddingTable:
    """Word-vector text format: optional ``count dim`` header, then one
    ``token v1 .. v_dim`` line per entry."""
    dim = None
    entries: dict[str, np.ndarray] = {}
    for line_no, raw in enumerate(source, start=1):
        parts = raw.split()
        if not parts:
            continue
        if line_no == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
            dim = int(parts[1])
            continue
        token, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
            if dim == 0:
                raise DimensionMismatch(line_no, "at least 1", 0)
        if len(values) != dim:
            raise DimensionMismatch(line_no, dim, len(values))
        if token in entries:
            raise DuplicateToken(token)
        try:
            entries[token] = np.array([float(v) for v in values])
        except ValueError:
            raise ParseError(line_no, raw.rstrip("\n"), "non-numeric vector component") from None
    return EmbeddingTable(dim or 0, entries)


def graph_from_embeddings(table: EmbeddingTable, tokens: Iterable[str]) -> WeightedGraph:
    tokens = list(dict.fromkeys(tokens))
    vecs = [table.vector(t) for t in tokens]
    edges = []
    for i in range(len(tokens)):
        for j in range(i + 1, len(tokens)):
            d = float(np.sqrt(np.sum((vecs[i] - vecs[j]) ** 2)))
            edges.append(Edge(tokens[i], tokens[j], d, f"embedding distance {d:.4f}"))
    return WeightedGraph(tokens, edges)


# -- text ----------------------------------------------------------------------


def normalize_tokens(text: str) -> list[str]:
    """NFC, case folding, punctuation (underscore included) to whitespace."""
    text = unicodedata.normalize("NFC", text).casefold()
    chars = [" " if unicodedata.category(ch).startswith("P") else ch for ch in text]
    return "".join(chars).split()


@dataclass(frozen=True)
class StopwordList:
    tokens: frozenset = frozenset()

    @classmethod
    def from_iterable(cls, words: Iterable[str]) -> StopwordList:
        out = set()
        for w in words:
            out.update(normalize_tokens(w))
        return cls(frozenset(out))

    def __contains__(self, token):
        return token in self.tokens


def load_stopwords(source: TextIO) -> StopwordList:
    return StopwordList.from_iterable(line for line in source if line.strip())


def extract_components(text: str, vocabulary: Iterable[str], stopwords: StopwordList | None = None) -> list[str]:
    """Greedy longest-match of normalised text against vocabulary entries.

    Multiword entries (``kitchen_table``) match runs of tokens; stopwords are
    dropped first; each component is reported once, at first occurrence.
    """
    stopwords = stopwords or StopwordList()
    table: dict[tuple[str, ...], str] = {}
    for entry in sorted(vocabulary):
        key = tuple(normalize_tokens(entry))
        if key and key not in table:
            table[key] = entry
    if not table:
        raise ValueError("vocabulary is empty")
    longest = max(len(k) for k in table)
    tokens = [t for t in normalize_tokens(text) if t not in stopwords]
    found: dict[str, None] = {}
    i = 0
    while i < len(tokens):
        for span in range(min(longest, len(tokens) - i), 0, -1):
            hit = table.get(tuple(tokens[i : i + span]))
            if hit is not None:
                found.setdefault(hit)
                i += span
                break
        else:
            i += 1
    if not found:
        raise NoComponentsFound("no vocabulary entries found in the text")
    return list(found)


# -- projection -----------------------------------------------------------------


def _top_eigenpairs(C: np.ndarray, k: int, iters: int = 1000, tol: float = 1e-12):
    """Power iteration with deflation for a symmetric PSD matrix."""
    C = C.copy()
    d = C.shape[0]
    vals, vecs = [], []
    for comp in range(k):
        v = np.ones(d) / math.sqrt(d) + 1e-3 * np.arange(d) * (comp + 1)
        for p in vecs:
            v -= (v @ p) * p
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(iters):
            w = C @ v
            for p in vecs:
                w -= (w @ p) * p
            norm = np.linalg.norm(w)
            if norm == 0.0:
                break
            w /= norm
            new = float(w @ C @ w)
            delta = abs(new - lam)
            v, lam = w, new
            if delta <= tol * max(abs(new), 1e-300) and np.linalg.norm(C @ v - lam * v) <= 1e-10 * max(lam, 1e-300):
                break
        vals.append(lam)
        vecs.append(v)
        C = C - lam * np.outer(v, v)
    return np.array(vals), np.array(vecs)


def pca_2d(vectors) -> np.ndarray:
    """Project onto the two leading principal directions of the sample
    covariance. Each direction is signed so its largest-magnitude entry is
    non-negative."""
    X = np.asarray(vectors, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 2:
        raise ValueError("pca_2d needs at least 2 vectors of dimension >= 2")
    Xc = X - X.mean(axis=0)
    if not np.any(Xc):
        raise DegenerateInput("all vectors are identical")
    C = Xc.T @ Xc / (X.shape[0] - 1)
    _, dirs = _top_eigenpairs(C, 2)
    for r in range(2):
        if dirs[r][np.argmax(np.abs(dirs[r]))] < 0:
            dirs[r] = -dirs[r]
    return Xc @ dirs.T
