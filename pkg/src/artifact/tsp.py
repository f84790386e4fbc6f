"""Exact shortest Hamiltonian paths (free endpoints), k-best enumeration, and
Euclidean tours.

Paths are solved by Held-Karp over node subsets where every node may start
the path, which is the same as a tour through a zero-cost virtual depot.
Missing edges are simply absent transitions.
"""
from __future__ import annotations

import heapq
import math
from array import array
from dataclasses import dataclass, field
from itertools import count

import numpy as np
from numba import njit

from .errors import Infeasible, NotEnoughPaths, TooLarge, TooLargeForExact
from .graph import MAX_EXACT_NODES, AugmentedGraph, as_graph, edge_key

#: exact tour DP bound (points)
MAX_EXACT_TOUR = 13
#: strict improvement threshold for 2-opt exchanges
TWO_OPT_EPS = 1e-12


@dataclass(frozen=True)
class HamiltonianPath:
    sequence: tuple[str, ...]
    total_weight: float
    edge_kinds: tuple[str, ...] = ()

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [edge_key(a, b) for a, b in zip(self.sequence, self.sequence[1:])]


@dataclass(frozen=True)
class EdgeConstraint:
    required: frozenset = frozenset()
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        req = frozenset(edge_key(*e) for e in self.required)
        forb = frozenset(edge_key(*e) for e in self.forbidden)
        if req & forb:
            raise ValueError(f"edges both required and forbidden: {sorted(req & forb)}")
        object.__setattr__(self, "required", req)
        object.__setattr__(self, "forbidden", forb)


@dataclass(frozen=True)
class KBestResult:
    paths: tuple[HamiltonianPath, ...]
    requested_k: int

    @property
    def count(self) -> int:
        return len(self.paths)

    def __len__(self):
        return len(self.paths)

    def __getitem__(self, i):
        return self.paths[i]


@dataclass(frozen=True)
class Tour:
    cycle: tuple[int, ...]
    length: float


# -- exact paths --------------------------------------------------------------


def _sequence(par, n, mask, v):
    out = [v]
    while True:
        p = par[mask * n + v]
        if p < 0:
            break
        mask ^= 1 << v
        v = p
        out.append(v)
    out.reverse()
    return out


def _path_dp(n, W, nbr, req):
    """Best (cost, index sequence) over Hamiltonian paths, canonical
    orientation (first index < last index), ties broken lexicographically."""
    size = 1 << n
    INF = math.inf
    cost = [INF] * (size * n)
    par = array("b", [-1]) * (size * n)
    for v in range(n):
        cost[(1 << v) * n + v] = 0.0
    for mask in range(1, size):
        base = mask * n
        m = mask
        while m:
            vbit = m & -m
            m ^= vbit
            v = vbit.bit_length() - 1
            c = cost[base + v]
            if c == INF:
                continue
            nxt = nbr[v] & ~mask
            pending = req[v] & ~mask
            if pending:
                # leaving v for good: its only unvisited required partner must come next
                if pending & (pending - 1):
                    continue
                nxt &= pending
            Wv = W[v]
            while nxt:
                ubit = nxt & -nxt
                nxt ^= ubit
                u = ubit.bit_length() - 1
                k = (mask | ubit) * n + u
                nc = c + Wv[u]
                old = cost[k]
                if nc < old:
                    cost[k] = nc
                    par[k] = v
                elif nc == old and _sequence(par, n, mask, v) < _sequence(par, n, mask, par[k]):
                    par[k] = v
    full = size - 1
    best = None
    for t in range(n):
        c = cost[full * n + t]
        if c == INF:
            continue
        seq = _sequence(par, n, full, t)
        if n > 1 and seq[0] > t:
            # the smallest-start route into t is reversed; so is every other
            continue
        if best is None or (c, seq) < best:
            best = (c, seq)
    return best


def _solvable(g):
    if isinstance(g, AugmentedGraph):
        return g.union, {c.key for c in g.collapsed}
    return g, set()


def solve_path(g, constraints: EdgeConstraint | None = None) -> HamiltonianPath:
    """Minimum-weight Hamiltonian path over all orderings and endpoints.

    ``g`` is a :class:`WeightedGraph` or an :class:`AugmentedGraph` (whose
    collapsed edges count as ordinary edges and are flagged in ``edge_kinds``).
    """
    graph, collapsed = _solvable(g)
    nodes = graph.sorted_nodes
    n = len(nodes)
    if n == 0:
        raise ValueError("cannot solve an empty graph")
    if n > MAX_EXACT_NODES:
        raise TooLarge(f"{n} nodes exceeds the exact solver bound {MAX_EXACT_NODES}")
    constraints = constraints or EdgeConstraint()
    idx = {x: i for i, x in enumerate(nodes)}
    W = [[0.0] * n for _ in range(n)]
    nbr = [0] * n
    req = [0] * n
    for e in graph.edges:
        if e.key in constraints.forbidden:
            continue
        i, j = idx[e.u], idx[e.v]
        W[i][j] = W[j][i] = e.weight
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    for a, b in constraints.required:
        if not graph.has_edge(a, b):
            raise Infeasible(f"required edge {a!r}-{b!r} is not in the graph")
        i, j = idx[a], idx[b]
        req[i] |= 1 << j
        req[j] |= 1 << i
    best = _path_dp(n, W, nbr, req)
    if best is None:
        raise Infeasible("no Hamiltonian path satisfies the constraints")
    seq = tuple(nodes[i] for i in best[1])
    kinds = tuple("collapsed" if edge_key(a, b) in collapsed else "direct" for a, b in zip(seq, seq[1:]))
    return HamiltonianPath(seq, graph.path_weight(seq), kinds)


def solve_path_k_best(g, k: int) -> KBestResult:
    """The ``k`` best distinct Hamiltonian paths by Lawler partitioning.

    Each popped solution splits its subproblem on the solution's edges in
    sequence order: the i-th child forbids edge i and requires edges 0..i-1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tie = count()
    first = solve_path(g)
    heap = [(first.total_weight, first.sequence, next(tie), first, EdgeConstraint())]
    out = []
    while heap and len(out) < k:
        _, _, _, path, cons = heapq.heappop(heap)
        out.append(path)
        if len(out) == k:
            break
        required = set(cons.required)
        for e in path.edges:
            if e in required:
                continue
            child = EdgeConstraint(frozenset(required), cons.forbidden | {e})
            try:
                p = solve_path(g, child)
            except Infeasible:
                pass
            else:
                heapq.heappush(heap, (p.total_weight, p.sequence, next(tie), p, child))
            required.add(e)
    return KBestResult(tuple(out), k)


def stability_gap(result: KBestResult) -> float:
    if len(result.paths) < 2:
        raise NotEnoughPaths("stability gap needs at least two paths")
    return result.paths[1].total_weight - result.paths[0].total_weight


# -- Euclidean tours ------------------------------------------------------------


def distance_matrix(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _canonical_cycle(cycle) -> tuple[int, ...]:
    cycle = list(cycle)
    k = cycle.index(0)
    cycle = cycle[k:] + cycle[:k]
    if len(cycle) > 2 and cycle[1] > cycle[-1]:
        cycle = [cycle[0]] + cycle[1:][::-1]
    return tuple(int(i) for i in cycle)


def cycle_length(D: np.ndarray, cycle) -> float:
    total = 0.0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        total += float(D[a, b])
    return total


def _held_karp_tour(D: np.ndarray) -> list[int]:
    n = D.shape[0]
    size = 1 << n
    dp = np.full((size, n), np.inf)
    par = np.full((size, n), -1, dtype=np.int64)
    dp[1, 0] = 0.0
    masks = np.arange(1, size, 2)
    pop = np.array([bin(m).count("1") for m in masks])
    for s in range(2, n + 1):
        layer = masks[pop == s]
        for j in range(1, n):
            sel = layer[(layer >> j) & 1 == 1]
            if sel.size == 0:
                continue
            cand = dp[sel ^ (1 << j)] + D[:, j]
            arg = cand.argmin(axis=1)
            dp[sel, j] = cand[np.arange(sel.size), arg]
            par[sel, j] = arg
    full = size - 1
    closing = dp[full] + D[:, 0]
    closing[0] = np.inf
    j = int(closing.argmin())
    tour, mask = [], full
    while j != 0:
        tour.append(j)
        prev = int(par[mask, j])
        mask ^= 1 << j
        j = prev
    tour.append(0)
    return tour[::-1]


@njit(cache=True)
def _nn_two_opt(D, eps):
    n = D.shape[0]
    tour = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    tour[0] = 0
    used[0] = True
    for k in range(1, n):
        last = tour[k - 1]
        best = -1
        bd = np.inf
        for c in range(n):
            if not used[c] and D[last, c] < bd:
                bd = D[last, c]
                best = c
        tour[k] = best
        used[best] = True
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            a = tour[i]
            b = tour[i + 1]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                c = tour[j]
                d = tour[(j + 1) % n]
                if D[a, c] + D[b, d] - D[a, b] - D[c, d] < -eps:
                    lo = i + 1
                    hi = j
                    while lo < hi:
                        tmp = tour[lo]
                        tour[lo] = tour[hi]
                        tour[hi] = tmp
                        lo += 1
                        hi -= 1
                    improved = True
                    break
            if improved:
                break
    return tour


def solve_tour(points, mode: str = "heuristic") -> Tour:
    """Closed Euclidean tour through ``points``.

    ``exact`` runs Held-Karp (at most ``MAX_EXACT_TOUR`` points);
    ``heuristic`` builds a nearest-neighbour tour from point 0 and applies
    first-improvement 2-opt, rescanning from the start after every exchange.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array (n, d)")
    n = pts.shape[0]
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    if n == 0:
        raise ValueError("no points")
    D = distance_matrix(pts)
    if n == 1:
        return Tour((0,), 0.0)
    if n == 2:
        return Tour((0, 1), 2 * float(D[0, 1]))
    if mode == "exact":
        if n > MAX_EXACT_TOUR:
            raise TooLargeForExact(f"exact tours are limited to {MAX_EXACT_TOUR} points, got {n}")
        cycle = _held_karp_tour(D)
    else:
        cycle = _nn_two_opt(D, TWO_OPT_EPS).tolist()
    cycle = _canonical_cycle(cycle)
    return Tour(cycle, cycle_length(D, list(cycle)))
