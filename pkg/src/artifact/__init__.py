"""Explain combinatorial artifacts as shortest associative chains through a
knowledge graph, and measure their novelty by optimal path length."""

from .errors import ArtifactError
from .explain import Artifact, Explanation, ExplanationStep, explain, explain_from_embeddings, render_explanation
from .graph import (
    AugmentedGraph,
    CollapsedEdge,
    Edge,
    PathWitness,
    WeightedGraph,
    connect_components,
    hamiltonian_augment,
    induce_subgraph,
    is_traceable,
    mst_fallback,
    ore_traceable,
    shortest_path,
)
from .novelty import (
    Sampler,
    bhh_ratio_series,
    calibrate_beta,
    estimate_renyi_entropy,
    renyi_entropy_uniform,
    tsp_novelty,
)
from .sources import (
    EmbeddingTable,
    StopwordList,
    StrengthTransform,
    extract_components,
    graph_from_embeddings,
    load_edge_list,
    load_embeddings,
    load_stopwords,
    pca_2d,
    strength_to_weight,
)
from .tsp import (
    EdgeConstraint,
    HamiltonianPath,
    KBestResult,
    Tour,
    solve_path,
    solve_path_k_best,
    solve_tour,
    stability_gap,
)

__version__ = "0.1.0"
