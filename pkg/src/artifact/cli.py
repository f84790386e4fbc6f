"""Command-line front end.

    tspexplain explain --graph flavor.tsv --components thyme,clove --k 2
    tspexplain novelty --embeddings vec.txt --text "..." --stopwords sw.txt
    tspexplain bhh-sim --dim 2 --ns 64,256,1024 --trials 10
    tspexplain entropy --points pts.txt
    tspexplain calibrate-beta --dim 2 --n 512 --trials 20 --seed 7

Exit status: 0 on success, 1 on domain errors (one line on stderr), 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ArtifactError
from .explain import (
    Artifact,
    explain,
    plot_coordinates,
    render_explanation,
)
from .graph import induce_subgraph
from .novelty import (
    DEFAULT_BETA_TRIALS,
    Sampler,
    bhh_ratio_series,
    calibrate_beta,
    estimate_renyi_entropy,
    trial_rng,
    tsp_novelty,
)
from .sources import (
    StrengthTransform,
    extract_components,
    graph_from_embeddings,
    load_edge_list,
    load_embeddings,
    load_stopwords,
)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_source_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", type=Path, help="TAB-separated edge list")
    src.add_argument("--embeddings", type=Path, help="word-vector text file")
    art = p.add_mutually_exclusive_group(required=True)
    art.add_argument("--components", help="comma-separated component names")
    art.add_argument("--text", help="free text; components are matched against the vocabulary")
    p.add_argument("--stopwords", type=Path, help="one stopword per line")
    p.add_argument(
        "--transform", default="reciprocal", choices=["reciprocal", "max-minus", "distance"],
        help="strength-to-weight mapping for --graph (default: reciprocal)",
    )
    p.add_argument("--no-augment", action="store_true", help="disable connectivity/Hamiltonian augmentation")


def _add_output_args(p, formats, default):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", type=Path, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tspexplain", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="k-best associative-chain explanations")
    _add_source_args(p)
    p.add_argument("--k", type=_positive_int, default=1)
    _add_output_args(p, ["text", "json", "dot"], "text")

    p = sub.add_parser("novelty", help="TSP-novelty score of an artifact")
    _add_source_args(p)
    _add_output_args(p, ["json", "text"], "json")

    p = sub.add_parser("bhh-sim", help="L_n / n^((d-1)/d) over increasing n")
    p.add_argument("--dim", type=_positive_int, default=2)
    p.add_argument("--ns", type=_int_list, default=[64, 256, 1024])
    p.add_argument("--trials", type=_positive_int, default=1)
    p.add_argument("--side", type=float, default=1.0, help="cube side length")
    p.add_argument("--sigma", type=float, help="truncated-Gaussian std (default: uniform)")
    p.add_argument("--mode", choices=["exact", "heuristic"], default="heuristic")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p, ["json"], "json")

    p = sub.add_parser("entropy", help="Renyi entropy estimate from tour length")
    p.add_argument("--points", type=Path, help="one point per line, whitespace-separated")
    p.add_argument("--dim", type=_positive_int, default=2, help="dimension when sampling")
    p.add_argument("--n", type=_positive_int, default=512, help="sample size when sampling")
    p.add_argument("--side", type=float, default=1.0, help="cube side when sampling")
    p.add_argument("--beta", type=float, help="tour constant (default: calibrated)")
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_BETA_TRIALS, help="calibration trials")
    p.add_argument("--mode", choices=["exact", "heuristic"], default="heuristic")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p, ["json"], "json")

    p = sub.add_parser("calibrate-beta", help="estimate beta_d on the uniform unit cube")
    p.add_argument("--dim", type=_positive_int, default=2)
    p.add_argument("--n", type=_positive_int, default=512)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--mode", choices=["exact", "heuristic"], default="heuristic")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p, ["json"], "json")
    return parser


def _read(path: Path):
    return path.open(encoding="utf-8")


def _load_artifact(args):
    """Knowledge graph, Artifact and (for embeddings) plot coordinates."""
    stop = None
    if args.stopwords:
        with _read(args.stopwords) as fh:
            stop = load_stopwords(fh)
    if args.graph:
        with _read(args.graph) as fh:
            K = load_edge_list(fh, StrengthTransform.parse(args.transform))
        vocab = K.nodes
        table = None
    else:
        with _read(args.embeddings) as fh:
            table = load_embeddings(fh)
        vocab = table.tokens
    if args.text is not None:
        comps = extract_components(args.text, vocab, stop)
    else:
        comps = list(dict.fromkeys(c.strip() for c in args.components.split(",") if c.strip()))
    artifact = Artifact(tuple(comps), args.text)
    plot = None
    if table is not None:
        K = graph_from_embeddings(table, comps)
        plot = plot_coordinates(table, comps) if len(comps) >= 2 else None
    return K, artifact, plot


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def _cmd_explain(args):
    K, artifact, plot = _load_artifact(args)
    expls = explain(K, artifact, args.k, allow_augmentation=not args.no_augment)
    graph = induce_subgraph(K, artifact.components).base if args.format == "dot" else None
    return render_explanation(
        expls, args.format, artifact=artifact.components, k=args.k, plot=plot, graph=graph
    )


def _cmd_novelty(args):
    K, artifact, _ = _load_artifact(args)
    report = tsp_novelty(K, artifact.components, allow_augmentation=not args.no_augment)
    if args.format == "text":
        lines = [f"novelty {report.score:.6g}  path {' -> '.join(report.path.sequence)}"]
        lines += [f"  {a} -> {b}  {w:.6g}  {j}" for (a, b), w, j in report.per_step]
        return "\n".join(lines) + "\n"
    return _dumps({"artifact": list(artifact.components), **report.to_dict()})


def _cmd_bhh(args):
    series = []
    for i in range(args.trials):
        seed = args.seed ^ i
        if args.sigma is None:
            sampler = Sampler.uniform_cube(args.dim, args.side, seed)
        else:
            sampler = Sampler.gaussian_truncated(args.dim, args.sigma, args.side, seed)
        series.append(bhh_ratio_series(sampler, args.ns, args.mode))
    mean = [
        {"n": n, "ratio": float(np.mean([s.entries[j][2] for s in series]))} for j, n in enumerate(args.ns)
    ]
    return _dumps({
        "command": "bhh-sim",
        "d": args.dim,
        "mode": args.mode,
        "side": args.side,
        "sigma": args.sigma,
        "seed": args.seed,
        "trials": [s.to_dict() for s in series],
        "mean_ratio": mean,
    })


def _load_points(path: Path) -> np.ndarray:
    rows = []
    with _read(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                rows.append([float(x) for x in line.split()])
            except ValueError:
                raise ArtifactError(f"{path}:{line_no}: non-numeric coordinate") from None
            if len(rows[-1]) != len(rows[0]):
                raise ArtifactError(f"{path}:{line_no}: expected {len(rows[0])} coordinates")
    if not rows:
        raise ArtifactError(f"{path}: no points")
    return np.array(rows)


def _cmd_entropy(args):
    if args.points:
        pts = _load_points(args.points)
    else:
        pts = trial_rng(args.seed, 0).random((args.n, args.dim)) * args.side
    n, d = pts.shape
    beta = args.beta
    calib = None
    if beta is None:
        calib = calibrate_beta(d, n, args.trials, args.seed, args.mode)
        beta = calib.beta_hat
    est = estimate_renyi_entropy(pts, beta, args.mode)
    return _dumps({
        "command": "entropy",
        "d": d,
        "mode": args.mode,
        **est.to_dict(),
        "calibration": calib.to_dict() if calib else None,
    })


def _cmd_calibrate(args):
    c = calibrate_beta(args.dim, args.n, args.trials, args.seed, args.mode)
    return _dumps({"command": "calibrate-beta", "seed": args.seed, **c.to_dict()})


COMMANDS = {
    "explain": _cmd_explain,
    "novelty": _cmd_novelty,
    "bhh-sim": _cmd_bhh,
    "entropy": _cmd_entropy,
    "calibrate-beta": _cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        output = COMMANDS[args.command](args)
    except (ArtifactError, ValueError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"tspexplain {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    if args.out:
        args.out.write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
