"""Two best explanations of the spice blend over the bundled flavor graph,
printed as text and written as DOT into the working directory.

    python scripts/spice_example.py [--out spice.dot]
"""
import argparse
from pathlib import Path

from artifact import fixtures
from artifact.explain import explain, render_explanation
from artifact.graph import induce_subgraph
from artifact.novelty import tsp_novelty
from artifact.sources import load_edge_list


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("spice.dot"))
    ap.add_argument("--k", type=int, default=2)
    args = ap.parse_args()

    with open(fixtures.path(fixtures.FLAVOR), encoding="utf-8") as fh:
        K = load_edge_list(fh)
    expls = explain(K, fixtures.SPICE_ARTIFACT, k=args.k)
    print(render_explanation(expls, "text"), end="")
    print(f"novelty score: {tsp_novelty(K, fixtures.SPICE_ARTIFACT).score:.4f}")
    dot = render_explanation(expls, "dot", graph=induce_subgraph(K, fixtures.SPICE_ARTIFACT).base)
    args.out.write_text(dot, encoding="utf-8")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
