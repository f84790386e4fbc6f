import json
import math
import re
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest

from artifact import fixtures
from artifact.errors import NoComponentsFound, NotTraceable, TooFewTokens
from artifact.explain import (
    Artifact,
    Explanation,
    ExplanationReport,
    explain,
    explain_from_embeddings,
    render_explanation,
)
from artifact.graph import WeightedGraph, induce_subgraph
from artifact.sources import EmbeddingTable, extract_components, load_edge_list, load_embeddings, load_stopwords

from oracles import all_hamiltonian_paths, dijkstra

GOLDEN = Path(__file__).parent / "golden"
JUSTIFICATION = "methyl benzoate, carvone, and linalyl acetate"


def _load(name, loader):
    with open(fixtures.path(name), encoding="utf-8") as fh:
        return loader(fh)


@pytest.fixture(scope="module")
def flavor():
    return _load(fixtures.FLAVOR, load_edge_list)


@pytest.fixture(scope="module")
def commonsense():
    return _load(fixtures.COMMONSENSE, load_edge_list)


@pytest.fixture(scope="module")
def spice(flavor):
    return explain(flavor, fixtures.SPICE_ARTIFACT, k=2)


class TestArtifact:
    def test_validation(self):
        with pytest.raises(ValueError):
            Artifact(())
        with pytest.raises(ValueError):
            Artifact(("a", "a"))


class TestExplain:
    def test_direct_pair(self, flavor):
        (e,) = explain(flavor, ["thyme", "clove"])
        assert e.rank == 1 and len(e.steps) == 1
        s = e.steps[0]
        assert s.kind == "direct" and {s.source, s.target} == {"thyme", "clove"}
        assert e.stability_gap is None

    def test_spice_k2_matches_oracle(self, flavor, spice):
        G = induce_subgraph(flavor, fixtures.SPICE_ARTIFACT)
        oracle = all_hamiltonian_paths(G.union)[:2]
        assert [(e.total_weight, e.sequence) for e in spice] == oracle
        assert spice[0].sequence != spice[1].sequence
        assert spice[0].stability_gap == oracle[1][0] - oracle[0][0]

    def test_spice_justification(self, spice):
        steps = [s for e in spice for s in e.steps if {s.source, s.target} == {"lavender_flower", "clove"}]
        assert steps
        assert all(s.justification == JUSTIFICATION for s in steps)

    def test_disconnected_is_bridged(self):
        K = WeightedGraph(edges=[("a", "m", 1.0), ("m", "b", 1.5), ("b", "c", 1.0), ("a", "n", 4.0), ("n", "c", 4.0)])
        (e,) = explain(K, ["a", "b", "c"])
        bridged = [s for s in e.steps if s.kind == "bridged"]
        assert len(bridged) == 1 and bridged[0].bridge_nodes == ("m",)
        assert bridged[0].weight == dijkstra(K, "a")["b"][0]
        assert bridged[0].justification.startswith("via m (2.5 over 2 hops)")
        with pytest.raises(NotTraceable):
            explain(K, ["a", "b", "c"], allow_augmentation=False)

    def test_commonsense_routine(self, commonsense):
        stop = _load(fixtures.STOPWORDS_EN, load_stopwords)
        comps = extract_components(fixtures.ROUTINE_SENTENCE, commonsense.nodes, stop)
        (e,) = explain(commonsense, comps)
        assert any(s.kind == "bridged" for s in e.steps)
        for s in e.steps:
            for b in s.bridge_nodes:
                assert b not in comps

    def test_fewer_than_k(self, flavor):
        expls = explain(flavor, ["thyme", "clove"], k=4)
        assert len(expls) == 1

    def test_single_component(self, flavor):
        (e,) = explain(flavor, ["thyme"])
        assert e.steps == () and e.total_weight == 0


class TestRendering:
    def test_single_step_text(self, flavor):
        out = render_explanation(explain(flavor, ["thyme", "clove"]), "text")
        arrows = [line for line in out.splitlines() if "→" in line]
        assert len(arrows) == 1
        assert re.search(r"clove —\(0\.1667, .+\)→ thyme", arrows[0])
        assert out.splitlines()[-1].strip().startswith("total:")

    def test_json_round_trip(self, spice):
        text = render_explanation(spice, "json", artifact=fixtures.SPICE_ARTIFACT, k=2)
        report = ExplanationReport.from_json(text)
        assert report.to_json() == text
        assert [Explanation.from_dict(e.to_dict()) for e in spice] == spice
        data = json.loads(text)
        assert set(data) == {"artifact", "k", "augmentation_used", "explanations", "plot"}
        assert set(data["explanations"][0]["steps"][0]) == {
            "from", "to", "weight", "kind", "bridge_nodes", "justification"
        }

    def test_dot_golden(self, flavor, spice):
        G = induce_subgraph(flavor, fixtures.SPICE_ARTIFACT)
        out = render_explanation(spice, "dot", graph=G.base)
        assert out == (GOLDEN / "spice_k2.dot").read_text(encoding="utf-8")
        colors = set(re.findall(r"penwidth=2\.5, color=(\w+)", out))
        assert len(colors) == 2

    def test_dot_dashes_bridges(self):
        K = WeightedGraph(edges=[("u", "x", 1.0), ("x", "v", 2.0)])
        out = render_explanation(explain(K, ["u", "v"]), "dot")
        assert '"x" [style=dashed];' in out
        assert 'style="bold,dashed"' in out

    def test_unknown_format(self, spice):
        with pytest.raises(ValueError):
            render_explanation(spice, "svg")


def table_2d(points):
    return EmbeddingTable(2, {t: np.array(p, dtype=float) for t, p in points.items()})


class TestEmbeddingExplanations:
    def test_two_tokens(self):
        t = table_2d({"a": (0, 0), "b": (3, 4)})
        (e,), plot = explain_from_embeddings(t, "a then b")
        assert e.total_weight == 5.0 and len(plot) == 2

    def test_square(self):
        side = 2.0
        t = table_2d({"p": (0, 0), "q": (side, 0), "r": (side, side), "s": (0, side)})
        (e,), _ = explain_from_embeddings(t, "p q r s")
        assert e.total_weight == pytest.approx(3 * side)
        assert all(s.weight == pytest.approx(side) for s in e.steps)

    def test_seven_token_oracle(self):
        rng = np.random.default_rng(12)
        pts = {f"w{i}": rng.normal(size=3) for i in range(7)}
        t = EmbeddingTable(3, pts)
        (e,), _ = explain_from_embeddings(t, " ".join(pts))
        best = min(
            sum(float(np.sqrt(np.sum((pts[a] - pts[b]) ** 2))) for a, b in zip(p, p[1:]))
            for p in permutations(sorted(pts))
        )
        assert math.isclose(e.total_weight, best, rel_tol=1e-12)

    def test_too_few(self):
        t = table_2d({"a": (0, 0), "b": (1, 1)})
        with pytest.raises(TooFewTokens):
            explain_from_embeddings(t, "only a here")
        with pytest.raises(NoComponentsFound):
            explain_from_embeddings(t, "nothing")

    def test_hindi_fixture(self):
        t = _load(fixtures.EMBEDDINGS, load_embeddings)
        stop = _load(fixtures.STOPWORDS_HI, load_stopwords)
        expls, plot = explain_from_embeddings(t, fixtures.HINDI_SENTENCE, stop, k=2)
        assert expls and {p["token"] for p in plot} == set(expls[0].sequence)
        text = render_explanation(expls, "json", plot=plot)
        assert "सरकार" in text
