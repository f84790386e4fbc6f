"""Weighted undirected graphs, shortest paths, and the augmentation steps that
turn an artifact's induced subgraph into a traceable one.

Node ids are plain strings. All orderings, tie-breaks included, follow Python's
string comparison so results are reproducible run to run.
"""
from __future__ import annotations

import heapq
import json
import math
from array import array
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import (
    CannotAugment,
    NoPath,
    ParentDisconnected,
    TooLarge,
    UnknownComponent,
)

#: largest node count handled by the exact subset dynamic programs
MAX_EXACT_NODES = 24


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    weight: float
    justification: str | None = None

    @property
    def key(self) -> tuple[str, str]:
        return edge_key(self.u, self.v)


class WeightedGraph:
    """Undirected graph with at most one weighted edge per node pair.

    Instances are never mutated after construction; derived graphs are built
    with :meth:`with_edges`, :meth:`subgraph` or :meth:`scaled`.
    """

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable = ()):
        node_set = set(nodes)
        table: dict[tuple[str, str], Edge] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.u == e.v:
                raise ValueError(f"self-loop on {e.u!r}")
            w = float(e.weight)
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"edge {e.u!r}-{e.v!r}: weight must be finite and >= 0, got {w}")
            key = e.key
            if key in table:
                raise ValueError(f"duplicate edge {key}")
            table[key] = Edge(key[0], key[1], w, e.justification)
            node_set.update(key)
        for n in node_set:
            if not isinstance(n, str) or not n:
                raise ValueError(f"node ids must be non-empty strings, got {n!r}")
        self._nodes = frozenset(node_set)
        self._edges = table
        adj: dict[str, dict[str, float]] = {n: {} for n in node_set}
        for (a, b), e in table.items():
            adj[a][b] = e.weight
            adj[b][a] = e.weight
        self._adj = adj

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    @cached_property
    def sorted_nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self._nodes))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges[k] for k in sorted(self._edges))

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, node):
        return node in self._nodes

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __repr__(self):
        return f"WeightedGraph(nodes={len(self._nodes)}, edges={len(self._edges)})"

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def weight(self, u: str, v: str) -> float:
        return self._adj[u][v]

    def edge(self, u: str, v: str) -> Edge:
        return self._edges[edge_key(u, v)]

    def neighbors(self, u: str) -> list[str]:
        return sorted(self._adj[u])

    def degree(self, u: str) -> int:
        return len(self._adj[u])

    def adjacency(self) -> dict[str, dict[str, float]]:
        return self._adj

    def subgraph(self, nodes: Iterable[str]) -> WeightedGraph:
        keep = set(nodes)
        return WeightedGraph(keep, (e for k, e in self._edges.items() if k[0] in keep and k[1] in keep))

    def with_edges(self, extra: Iterable[Edge]) -> WeightedGraph:
        return WeightedGraph(self._nodes, list(self._edges.values()) + list(extra))

    def scaled(self, c: float) -> WeightedGraph:
        return WeightedGraph(
            self._nodes, (Edge(e.u, e.v, e.weight * c, e.justification) for e in self._edges.values())
        )

    def path_weight(self, sequence) -> float:
        total = 0.0
        for a, b in zip(sequence, sequence[1:]):
            total += self._adj[a][b]
        return total

    def to_dot(self, name: str = "K") -> str:
        lines = [f"graph {name} {{"]
        for n in self.sorted_nodes:
            lines.append(f"  {_q(n)};")
        for e in self.edges:
            attrs = f"weight={e.weight!r}"
            if e.justification:
                attrs += f", label={_q(e.justification)}"
            lines.append(f"  {_q(e.u)} -- {_q(e.v)} [{attrs}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


@dataclass(frozen=True)
class PathWitness:
    sequence: tuple[str, ...]
    total_weight: float


@dataclass(frozen=True)
class CollapsedEdge:
    """A multihop path of the parent graph standing in for one edge.

    ``bridge`` lists the interior nodes in order from ``u`` to ``v``; the
    weight is the left-to-right sum of the parent edges along that route.
    """

    u: str
    v: str
    weight: float
    bridge: tuple[str, ...]

    @property
    def key(self):
        return (self.u, self.v)

    @property
    def route(self) -> tuple[str, ...]:
        return (self.u, *self.bridge, self.v)

    def oriented(self, start: str) -> tuple[str, ...]:
        """Route read from ``start`` to the other endpoint."""
        return self.route if start == self.u else self.route[::-1]


@dataclass(frozen=True)
class AugmentedGraph:
    base: WeightedGraph
    parent: WeightedGraph
    collapsed: tuple[CollapsedEdge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "collapsed", tuple(sorted(self.collapsed, key=lambda c: c.key)))

    @property
    def nodes(self) -> frozenset[str]:
        return self.base.nodes

    @cached_property
    def _collapsed_index(self) -> dict[tuple[str, str], CollapsedEdge]:
        return {c.key: c for c in self.collapsed}

    def collapsed_edge(self, u: str, v: str) -> CollapsedEdge | None:
        return self._collapsed_index.get(edge_key(u, v))

    @cached_property
    def union(self) -> WeightedGraph:
        extra = [Edge(c.u, c.v, c.weight, "via " + ", ".join(c.bridge)) for c in self.collapsed]
        return self.base.with_edges(extra)

    def add(self, edges: Iterable[CollapsedEdge]) -> AugmentedGraph:
        return AugmentedGraph(self.base, self.parent, self.collapsed + tuple(edges))

    def scaled(self, c: float) -> AugmentedGraph:
        return AugmentedGraph(
            self.base.scaled(c),
            self.parent.scaled(c),
            tuple(CollapsedEdge(e.u, e.v, e.weight * c, e.bridge) for e in self.collapsed),
        )


def as_graph(g) -> WeightedGraph:
    return g.union if isinstance(g, AugmentedGraph) else g


# -- shortest paths ---------------------------------------------------------


def shortest_paths_from(K: WeightedGraph, source: str, blocked=frozenset()):
    """Label-setting Dijkstra returning ``{node: (dist, path)}``.

    Labels are ordered by (distance, node sequence) so among equal-weight
    routes the lexicographically smallest sequence wins. Nodes in ``blocked``
    may be reached but are never expanded (used to keep bridges clear of
    artifact nodes).
    """
    adj = K.adjacency()
    done: dict[str, tuple[float, tuple[str, ...]]] = {}
    heap = [(0.0, (source,))]
    while heap:
        d, path = heapq.heappop(heap)
        node = path[-1]
        if node in done:
            continue
        done[node] = (d, path)
        if node in blocked and node != source:
            continue
        for nb, w in adj[node].items():
            if nb not in done:
                heapq.heappush(heap, (d + w, path + (nb,)))
    return done


def shortest_path(K: WeightedGraph, u: str, v: str) -> PathWitness:
    for x in (u, v):
        if x not in K:
            raise UnknownComponent(x)
    if u == v:
        raise ValueError("endpoints must differ")
    found = shortest_paths_from(K, u).get(v)
    if found is None:
        raise NoPath(f"no path between {u!r} and {v!r}")
    return PathWitness(found[1], found[0])


def connected_components(g: WeightedGraph) -> list[list[str]]:
    """Components as sorted node lists, ordered by their smallest node."""
    adj = g.adjacency()
    seen: set[str] = set()
    out = []
    for start in g.sorted_nodes:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


# -- artifact subgraph and augmentation --------------------------------------


def induce_subgraph(K: WeightedGraph, components: Iterable[str]) -> AugmentedGraph:
    comps = list(components)
    if not comps:
        raise ValueError("an artifact needs at least one component")
    for c in comps:
        if c not in K:
            raise UnknownComponent(c)
    return AugmentedGraph(K.subgraph(comps), K)


def _bridging_paths(G: AugmentedGraph) -> dict[tuple[str, str], tuple[float, tuple[str, ...]]]:
    """Parent shortest paths between artifact nodes whose interiors avoid the
    artifact. Keyed by ordered pair (a, b) with a < b, computed from a."""
    artifact = G.base.nodes
    out = {}
    for a in G.base.sorted_nodes:
        reach = shortest_paths_from(G.parent, a, blocked=artifact)
        for b, (d, path) in reach.items():
            if b in artifact and a < b:
                out[(a, b)] = (d, path)
    return out


def _collapse(path: tuple[str, ...], parent: WeightedGraph) -> CollapsedEdge:
    return CollapsedEdge(path[0], path[-1], parent.path_weight(path), tuple(path[1:-1]))


def connect_components(G: AugmentedGraph) -> AugmentedGraph:
    """Join the pieces of G with collapsed parent paths of minimum total weight.

    Components are contracted to metagraph vertices; the distance between two
    components is their cheapest cross pair in the parent, and a Kruskal pass
    over the metagraph picks which bridges to materialise.
    """
    comps = connected_components(G.union)
    if len(comps) <= 1:
        return G
    owner = {n: i for i, comp in enumerate(comps) for n in comp}
    best: dict[tuple[int, int], tuple[float, str, str]] = {}
    paths = _bridging_paths(G)
    for (a, b), (d, _) in paths.items():
        ca, cb = owner[a], owner[b]
        if ca == cb:
            continue
        key = (min(ca, cb), max(ca, cb))
        cand = (d, a, b)
        if key not in best or cand < best[key]:
            best[key] = cand
    ds = _DisjointSet(range(len(comps)))
    added = []
    for (ci, cj), (d, a, b) in sorted(best.items(), key=lambda kv: kv[1]):
        if ds.union(ci, cj):
            added.append(_collapse(paths[(a, b)][1], G.parent))
    if len(added) != len(comps) - 1:
        raise ParentDisconnected("artifact components cannot all be bridged in the parent graph")
    return G.add(added)


def ore_traceable(g) -> bool:
    """Path form of Ore's condition: every non-adjacent pair has degree sum
    at least n - 1. True guarantees a Hamiltonian path; False says nothing."""
    g = as_graph(g)
    n = len(g)
    if n < 2:
        return True
    nodes = g.sorted_nodes
    for u, v in combinations(nodes, 2):
        if not g.has_edge(u, v) and g.degree(u) + g.degree(v) < n - 1:
            return False
    return True


def _palmer_path(g: WeightedGraph) -> tuple[str, ...] | None:
    # Palmer's cycle construction on g plus one universal vertex (index n);
    # dropping that vertex leaves a Hamiltonian path of g.
    nodes = g.sorted_nodes
    n = len(nodes)
    idx = {x: i for i, x in enumerate(nodes)}
    adj = [set(idx[y] for y in g.adjacency()[x]) | {n} for x in nodes]
    adj.append(set(range(n)))
    m = n + 1
    cyc = list(range(m))
    for _ in range(m + 1):
        gap = next((i for i in range(m) if cyc[(i + 1) % m] not in adj[cyc[i]]), None)
        if gap is None:
            break
        cyc = cyc[gap:] + cyc[:gap]
        a, b = cyc[0], cyc[1]
        j = next((j for j in range(2, m - 1) if cyc[j] in adj[a] and cyc[j + 1] in adj[b]), None)
        if j is None:
            return None
        cyc = [a] + cyc[1 : j + 1][::-1] + cyc[j + 1 :]
    else:
        return None
    k = cyc.index(n)
    order = cyc[k + 1 :] + cyc[:k]
    return tuple(nodes[i] for i in order)


def _traceable_dp(g: WeightedGraph) -> tuple[str, ...] | None:
    nodes = g.sorted_nodes
    n = len(nodes)
    idx = {x: i for i, x in enumerate(nodes)}
    adj = [sum(1 << idx[y] for y in g.adjacency()[x]) for x in nodes]
    full = (1 << n) - 1
    reach = array("I", [0]) * (1 << n)
    for v in range(n):
        reach[1 << v] = 1 << v
    for mask in range(1, full):
        ends = reach[mask]
        while ends:
            vbit = ends & -ends
            ends ^= vbit
            nxt = adj[vbit.bit_length() - 1] & ~mask
            while nxt:
                ubit = nxt & -nxt
                nxt ^= ubit
                reach[mask | ubit] |= ubit
    if not reach[full]:
        return None
    mask, ends = full, reach[full]
    out = []
    while True:
        vbit = ends & -ends
        v = vbit.bit_length() - 1
        out.append(nodes[v])
        mask ^= vbit
        if not mask:
            break
        ends = reach[mask] & adj[v]
    return tuple(out)


def _canonical(seq):
    seq = tuple(seq)
    return seq if seq[0] <= seq[-1] else seq[::-1]


def is_traceable(g) -> tuple[bool, PathWitness | None]:
    """Decide whether ``g`` has a Hamiltonian path, returning a witness.

    Ore's condition is tried first (witness built constructively); otherwise
    an exact reachability DP over node subsets decides, up to
    ``MAX_EXACT_NODES`` nodes.
    """
    g = as_graph(g)
    n = len(g)
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        return True, PathWitness(g.sorted_nodes, 0.0)
    seq = _palmer_path(g) if ore_traceable(g) else None
    if seq is None:
        if n > MAX_EXACT_NODES:
            raise TooLarge(f"{n} nodes exceeds the exact traceability bound {MAX_EXACT_NODES}")
        seq = _traceable_dp(g)
    if seq is None:
        return False, None
    seq = _canonical(seq)
    return True, PathWitness(seq, g.path_weight(seq))


def hamiltonian_augment(G: AugmentedGraph) -> AugmentedGraph:
    """Greedily add the cheapest bridging edge between non-adjacent artifact
    pairs until the union graph has a Hamiltonian path."""

    def traceable(aug):
        g = aug.union
        if ore_traceable(g):
            return True
        if len(g) > MAX_EXACT_NODES:
            return False
        return is_traceable(g)[0]

    if traceable(G):
        return G
    union = G.union
    candidates = sorted(
        (d, a, b, path) for (a, b), (d, path) in _bridging_paths(G).items() if not union.has_edge(a, b)
    )
    for d, a, b, path in candidates:
        G = G.add([_collapse(path, G.parent)])
        if traceable(G):
            return G
    n = len(G.base)
    if len(G.union.edges) == n * (n - 1) // 2:
        return G
    raise CannotAugment("no bridging paths left and the artifact graph is still not traceable")


def augmented_subgraph(K: WeightedGraph, components: Iterable[str], allow_augmentation: bool = True) -> AugmentedGraph:
    """Induced subgraph, then (optionally) connectivity and Hamiltonian
    augmentation. Without augmentation the induced graph is returned as is."""
    G = induce_subgraph(K, components)
    if allow_augmentation:
        G = hamiltonian_augment(connect_components(G))
    return G


@dataclass(frozen=True)
class SpanningTraversal:
    edges: tuple[Edge, ...]
    total_weight: float
    preorder: tuple[str, ...]
    walk: tuple[str, ...] = field(default=())


def mst_fallback(g) -> SpanningTraversal:
    """Minimum spanning tree plus a depth-first traversal from the smallest
    node. ``walk`` repeats nodes when backtracking; ``preorder`` does not."""
    g = as_graph(g)
    ds = _DisjointSet(g.nodes)
    tree = [e for e in sorted(g.edges, key=lambda e: (e.weight, e.u, e.v)) if ds.union(e.u, e.v)]
    tree_adj: dict[str, list[str]] = {n: [] for n in g.nodes}
    for e in tree:
        tree_adj[e.u].append(e.v)
        tree_adj[e.v].append(e.u)
    preorder, walk = [], []
    if len(g):
        seen = set()

        def visit(x):
            seen.add(x)
            preorder.append(x)
            walk.append(x)
            for y in sorted(tree_adj[x]):
                if y not in seen:
                    visit(y)
                    walk.append(x)

        visit(g.sorted_nodes[0])
    total = 0.0
    for e in tree:
        total += e.weight
    return SpanningTraversal(tuple(tree), total, tuple(preorder), tuple(walk))
