"""Mean L_n / n^((d-1)/d) over seeds for uniform and truncated-Gaussian samples.

    python scripts/bhh_convergence.py --dim 2 --ns 64,256,1024 --seeds 10
"""
import argparse
import json

import numpy as np

from artifact.novelty import Sampler, bhh_ratio_series


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--ns", default="64,256,1024")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--sigma", type=float, default=0.15)
    args = ap.parse_args()
    ns = [int(x) for x in args.ns.split(",")]

    samplers = {
        "uniform side 1": lambda s: Sampler.uniform_cube(args.dim, 1.0, s),
        "uniform side 0.5": lambda s: Sampler.uniform_cube(args.dim, 0.5, s),
        f"gaussian sigma {args.sigma}": lambda s: Sampler.gaussian_truncated(args.dim, args.sigma, 1.0, s),
    }
    table = {}
    for name, make in samplers.items():
        ratios = np.array([bhh_ratio_series(make(s), ns).ratios for s in range(args.seeds)])
        table[name] = {str(n): {"mean": float(m), "sd": float(sd)} for n, m, sd in zip(ns, ratios.mean(0), ratios.std(0, ddof=1))}
        print(f"{name:>22}: " + "  ".join(f"n={n}: {m:.4f}" for n, m in zip(ns, ratios.mean(0))))
    print(json.dumps(table, indent=2))


if __name__ == "__main__":
    main()
