"""From (knowledge graph, artifact) to ranked associative chains with
per-step justifications, and their text/JSON/DOT renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotTraceable, TooFewTokens
from .graph import AugmentedGraph, WeightedGraph, augmented_subgraph, is_traceable
from .sources import (
    DegenerateInput,
    EmbeddingTable,
    StopwordList,
    extract_components,
    graph_from_embeddings,
    pca_2d,
)
from .tsp import HamiltonianPath, solve_path_k_best, stability_gap


@dataclass(frozen=True)
class Artifact:
    components: tuple[str, ...]
    source_text: str | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("an artifact needs at least one component")
        if len(set(comps)) != len(comps):
            raise ValueError("artifact components must be distinct")
        object.__setattr__(self, "components", comps)


@dataclass(frozen=True)
class ExplanationStep:
    source: str
    target: str
    weight: float
    kind: str  # "direct" | "bridged"
    bridge_nodes: tuple[str, ...] = ()
    justification: str = ""

    def to_dict(self):
        return {
            "from": self.source,
            "to": self.target,
            "weight": self.weight,
            "kind": self.kind,
            "bridge_nodes": list(self.bridge_nodes),
            "justification": self.justification,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["from"], d["to"], d["weight"], d["kind"], tuple(d["bridge_nodes"]), d["justification"])


@dataclass(frozen=True)
class Explanation:
    rank: int
    steps: tuple[ExplanationStep, ...]
    total_weight: float
    stability_gap: float | None = None

    @property
    def sequence(self) -> tuple[str, ...]:
        if not self.steps:
            return ()
        return (self.steps[0].source,) + tuple(s.target for s in self.steps)

    def to_dict(self):
        return {
            "rank": self.rank,
            "total_weight": self.total_weight,
            "stability_gap": self.stability_gap,
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, d):
        steps = tuple(ExplanationStep.from_dict(s) for s in d["steps"])
        return cls(d["rank"], steps, d["total_weight"], d["stability_gap"])


def _fmt(w: float) -> str:
    return f"{w:.4g}"


def explanation_steps(path: HamiltonianPath, G: AugmentedGraph) -> tuple[ExplanationStep, ...]:
    steps = []
    union = G.union
    for a, b in zip(path.sequence, path.sequence[1:]):
        w = union.weight(a, b)
        c = G.collapsed_edge(a, b)
        if c is None:
            steps.append(ExplanationStep(a, b, w, "direct", (), G.base.edge(a, b).justification or ""))
            continue
        route = c.oriented(a)
        hops = []
        for x, y in zip(route, route[1:]):
            j = G.parent.edge(x, y).justification
            hops.append(f"{x}-{y}: {j}" if j else f"{x}-{y}")
        text = f"via {', '.join(route[1:-1])} ({_fmt(c.weight)} over {len(route) - 1} hops); " + "; ".join(hops)
        steps.append(ExplanationStep(a, b, w, "bridged", tuple(route[1:-1]), text))
    return tuple(steps)


def explain(K: WeightedGraph, artifact, k: int = 1, allow_augmentation: bool = True) -> list[Explanation]:
    """Rank the ``k`` shortest Hamiltonian paths through the artifact.

    With ``allow_augmentation`` off, neither connectivity nor Hamiltonian
    augmentation runs and a non-traceable artifact raises ``NotTraceable``.
    Fewer than ``k`` explanations come back when fewer distinct paths exist.
    """
    if not isinstance(artifact, Artifact):
        artifact = Artifact(tuple(artifact))
    G = augmented_subgraph(K, artifact.components, allow_augmentation)
    if not allow_augmentation and not is_traceable(G)[0]:
        raise NotTraceable("artifact graph has no Hamiltonian path and augmentation is disabled")
    result = solve_path_k_best(G, k)
    gap = stability_gap(result) if len(result) >= 2 else None
    return [
        Explanation(rank, explanation_steps(p, G), p.total_weight, gap if rank == 1 else None)
        for rank, p in enumerate(result.paths, start=1)
    ]


def explain_from_embeddings(table: EmbeddingTable, text: str, stopwords: StopwordList | None = None, k: int = 1):
    """Explain a text through distances in an embedding space.

    Returns the explanations and 2-D PCA coordinates for the matched tokens.
    """
    tokens = extract_components(text, table.tokens, stopwords)
    if len(tokens) < 2:
        raise TooFewTokens(f"need at least 2 known tokens, found {tokens}")
    K = graph_from_embeddings(table, tokens)
    expls = explain(K, Artifact(tuple(tokens), text), k)
    return expls, plot_coordinates(table, tokens)


def plot_coordinates(table: EmbeddingTable, tokens: Sequence[str]) -> list[dict]:
    vecs = [table.vector(t) for t in tokens]
    try:
        xy = pca_2d(vecs)
    except (DegenerateInput, ValueError):
        xy = [[0.0, 0.0] for _ in tokens]
    return [{"token": t, "x": float(p[0]), "y": float(p[1])} for t, p in zip(tokens, xy)]


# -- rendering ---------------------------------------------------------------


@dataclass
class ExplanationReport:
    artifact: list[str]
    k: int
    explanations: list[Explanation]
    plot: list[dict] | None = None

    @property
    def augmentation_used(self) -> bool:
        return any(s.kind == "bridged" for e in self.explanations for s in e.steps)

    def to_dict(self):
        return {
            "artifact": list(self.artifact),
            "k": self.k,
            "augmentation_used": self.augmentation_used,
            "explanations": [e.to_dict() for e in self.explanations],
            "plot": self.plot,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ExplanationReport:
        d = json.loads(text)
        return cls(d["artifact"], d["k"], [Explanation.from_dict(e) for e in d["explanations"]], d["plot"])


PATH_COLORS = ("purple", "brown", "darkgreen", "darkorange", "blue", "red", "teal", "goldenrod")


def _q(s):
    return json.dumps(s, ensure_ascii=False)


def _render_text(expls: Sequence[Explanation]) -> str:
    lines = []
    for e in expls:
        head = f"#{e.rank}  total={_fmt(e.total_weight)}"
        if e.stability_gap is not None:
            head += f"  gap={_fmt(e.stability_gap)}"
        lines.append(head)
        if not e.steps:
            lines.append("  (single component, nothing to connect)")
        for s in e.steps:
            note = f", {s.justification}" if s.justification else ""
            lines.append(f"  {s.source} —({_fmt(s.weight)}{note})→ {s.target}")
        lines.append(f"  total: {_fmt(e.total_weight)}")
    return "\n".join(lines) + "\n"


def _render_dot(expls: Sequence[Explanation], graph: WeightedGraph | None) -> str:
    nodes = sorted({n for e in expls for n in e.sequence} | (set(graph.nodes) if graph else set()))
    bridges = sorted({b for e in expls for s in e.steps for b in s.bridge_nodes} - set(nodes))
    used = {tuple(sorted((s.source, s.target))) for e in expls for s in e.steps}
    lines = ["graph explanation {", "  node [shape=ellipse];"]
    lines += [f"  {_q(n)};" for n in nodes]
    lines += [f"  {_q(b)} [style=dashed];" for b in bridges]
    if graph is not None:
        for edge in graph.edges:
            if (edge.u, edge.v) not in used:
                lines.append(f"  {_q(edge.u)} -- {_q(edge.v)} [style=solid, penwidth=0.5, color=gray60];")
    for e in expls:
        color = PATH_COLORS[(e.rank - 1) % len(PATH_COLORS)]
        for s in e.steps:
            route = (s.source, *s.bridge_nodes, s.target)
            hop_style = "bold" if s.kind == "direct" else "bold,dashed"
            for x, y in zip(route, route[1:]):
                lines.append(
                    f"  {_q(x)} -- {_q(y)} [style={_q(hop_style)}, penwidth=2.5, color={color}, "
                    f"label={_q(f'{e.rank}: {_fmt(s.weight)}')}];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_explanation(
    expls: Sequence[Explanation],
    fmt: str = "text",
    *,
    artifact: Iterable[str] | None = None,
    k: int | None = None,
    plot: list[dict] | None = None,
    graph: WeightedGraph | None = None,
) -> str:
    """Render explanations as ``text``, ``json`` or ``dot``.

    ``graph`` (the induced subgraph) lets the DOT output draw unused edges.
    """
    if not expls:
        raise ValueError("nothing to render")
    if fmt == "text":
        return _render_text(expls)
    if fmt == "json":
        art = list(artifact) if artifact is not None else sorted(expls[0].sequence)
        return ExplanationReport(art, k if k is not None else len(expls), list(expls), plot).to_json()
    if fmt == "dot":
        return _render_dot(expls, graph)
    raise ValueError(f"unknown format {fmt!r}")
