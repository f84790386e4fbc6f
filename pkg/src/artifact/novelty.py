"""TSP-novelty of artifacts and the tour-length statistics behind it.

The asymptotic link is the Beardwood-Halton-Hammersley law: for n i.i.d.
points with density f in d dimensions, L_n / n^((d-1)/d) tends to
beta_d * integral f^((d-1)/d). With gamma = (d-1)/d this turns into a Renyi
entropy estimate, H = (ln(L_n / n^gamma) - ln beta) / (1 - gamma).

Random streams: trial ``i`` of a Monte Carlo run draws from
``numpy.random.default_rng(seed ^ i)`` (PCG64); series entry for sample size
``n`` draws from ``default_rng([seed, n])``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotTraceable, TooLargeForExact
from .explain import explanation_steps
from .graph import WeightedGraph, augmented_subgraph, is_traceable
from .tsp import MAX_EXACT_TOUR, HamiltonianPath, solve_path, solve_tour

DEFAULT_BETA_TRIALS = 20
DEFAULT_BETA_SEED = 0


@dataclass(frozen=True)
class NoveltyReport:
    score: float
    path: HamiltonianPath
    augmentation_used: bool
    per_step: tuple[tuple[tuple[str, str], float, str], ...]

    def to_dict(self):
        return {
            "score": self.score,
            "path": list(self.path.sequence),
            "augmentation_used": self.augmentation_used,
            "steps": [
                {"from": a, "to": b, "weight": w, "justification": j} for (a, b), w, j in self.per_step
            ],
        }


def tsp_novelty(K: WeightedGraph, components, allow_augmentation: bool = True) -> NoveltyReport:
    """Length of the optimal Hamiltonian path through the artifact's
    (augmented) subgraph."""
    G = augmented_subgraph(K, list(components), allow_augmentation)
    if not allow_augmentation and not is_traceable(G)[0]:
        raise NotTraceable("artifact graph has no Hamiltonian path and augmentation is disabled")
    path = solve_path(G)
    steps = explanation_steps(path, G)
    per_step = tuple(((s.source, s.target), s.weight, s.justification) for s in steps)
    return NoveltyReport(path.total_weight, path, "collapsed" in path.edge_kinds, per_step)


@dataclass(frozen=True)
class Sampler:
    """Bounded-support point distribution on [0, side]^dim.

    ``uniform_cube``: uniform on the cube. ``gaussian_truncated``: normal
    centred in the cube with std ``sigma``, rejected outside it.
    ``mixture``: weighted mix of other samplers of the same dimension.
    """

    kind: str
    dim: int
    side: float = 1.0
    sigma: float | None = None
    components: tuple = ()
    seed: int = 0

    @classmethod
    def uniform_cube(cls, dim, side=1.0, seed=0):
        return cls("uniform_cube", dim, side, seed=seed)

    @classmethod
    def gaussian_truncated(cls, dim, sigma, side=1.0, seed=0):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return cls("gaussian_truncated", dim, side, sigma=sigma, seed=seed)

    @classmethod
    def mixture(cls, components, seed=0):
        comps = tuple((float(w), s) for w, s in components)
        if not comps or any(w < 0 for w, _ in comps) or sum(w for w, _ in comps) <= 0:
            raise ValueError("mixture weights must be non-negative with a positive sum")
        dims = {s.dim for _, s in comps}
        if len(dims) != 1:
            raise ValueError("mixture components must share a dimension")
        side = max(s.side for _, s in comps)
        return cls("mixture", dims.pop(), side, components=comps, seed=seed)

    def scaled(self, a: float) -> Sampler:
        return Sampler(
            self.kind,
            self.dim,
            self.side * a,
            None if self.sigma is None else self.sigma * a,
            tuple((w, s.scaled(a)) for w, s in self.components),
            self.seed,
        )

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "uniform_cube":
            return rng.random((n, self.dim)) * self.side
        if self.kind == "gaussian_truncated":
            out = np.empty((0, self.dim))
            centre = self.side / 2
            while out.shape[0] < n:
                z = rng.normal(centre, self.sigma, size=(max(2 * (n - out.shape[0]), 16), self.dim))
                z = z[np.all((z >= 0) & (z <= self.side), axis=1)]
                out = np.vstack([out, z])
            return out[:n]
        if self.kind == "mixture":
            w = np.array([c[0] for c in self.components])
            labels = rng.choice(len(w), size=n, p=w / w.sum())
            out = np.empty((n, self.dim))
            for i, (_, s) in enumerate(self.components):
                rows = labels == i
                out[rows] = s.draw(int(rows.sum()), rng)
            return out
        raise ValueError(f"unknown sampler kind {self.kind!r}")


def trial_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(seed ^ i)


@dataclass(frozen=True)
class RatioSeries:
    d: int
    entries: tuple[tuple[int, float, float], ...]
    mode: str

    @property
    def ratios(self) -> list[float]:
        return [r for _, _, r in self.entries]

    def to_dict(self):
        return {
            "d": self.d,
            "mode": self.mode,
            "entries": [{"n": n, "L_n": L, "ratio": r} for n, L, r in self.entries],
        }


def bhh_ratio_series(sampler: Sampler, ns: Sequence[int], mode: str = "heuristic") -> RatioSeries:
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("sample sizes must be strictly increasing")
    if mode == "exact" and ns and ns[-1] > MAX_EXACT_TOUR:
        raise TooLargeForExact(f"exact mode is limited to n <= {MAX_EXACT_TOUR}")
    d = sampler.dim
    entries = []
    for n in ns:
        pts = sampler.draw(n, np.random.default_rng([sampler.seed, n]))
        L = solve_tour(pts, mode).length
        entries.append((n, L, L / n ** ((d - 1) / d)))
    return RatioSeries(d, tuple(entries), mode)


@dataclass(frozen=True)
class BetaCalibration:
    d: int
    beta_hat: float
    n: int
    trials: int
    std_error: float
    mode: str = "heuristic"

    def to_dict(self):
        return {
            "d": self.d,
            "n": self.n,
            "trials": self.trials,
            "mode": self.mode,
            "beta_hat": self.beta_hat,
            "std_error": self.std_error,
        }


def calibrate_beta(d: int, n: int, trials: int, seed: int = 0, mode: str = "heuristic") -> BetaCalibration:
    """Estimate beta_d from tours through uniform unit-cube samples, where the
    density integral is 1 and the normalised length estimates beta_d itself."""
    if d < 2 or n < 32 or trials < 5:
        raise ValueError("calibration needs d >= 2, n >= 32 and trials >= 5")
    ratios = []
    for i in range(trials):
        pts = trial_rng(seed, i).random((n, d))
        ratios.append(solve_tour(pts, mode).length / n ** ((d - 1) / d))
    r = np.array(ratios)
    return BetaCalibration(d, float(r.mean()), n, trials, float(r.std(ddof=1) / math.sqrt(trials)), mode)


@dataclass(frozen=True)
class EntropyEstimate:
    gamma: float
    h_hat: float
    n: int
    beta_used: float
    tour_length: float

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "h_hat": self.h_hat,
            "n": self.n,
            "beta_used": self.beta_used,
            "tour_length": self.tour_length,
        }


def estimate_renyi_entropy(points, beta: float | None = None, mode: str = "heuristic") -> EntropyEstimate:
    """Renyi entropy of order (d-1)/d from the tour length through ``points``.

    Without ``beta``, one is calibrated at the same (d, n, mode) so the
    heuristic's length bias cancels.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    if d < 2 or n < 8:
        raise ValueError("entropy estimation needs d >= 2 and at least 8 points")
    if beta is None:
        beta = calibrate_beta(d, n, DEFAULT_BETA_TRIALS, DEFAULT_BETA_SEED, mode).beta_hat
    if not beta > 0:
        raise ValueError("beta must be positive")
    gamma = (d - 1) / d
    L = solve_tour(pts, mode).length
    h = d * (math.log(L / n**gamma) - math.log(beta))
    return EntropyEstimate(gamma, h, n, float(beta), L)


def renyi_entropy_uniform(volume: float) -> float:
    """Renyi entropy (any order) of the uniform density on a set of this volume."""
    if not volume > 0:
        raise ValueError("volume must be positive")
    return math.log(volume)
