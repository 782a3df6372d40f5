#!/usr/bin/env python3
"""Sweep perturbation size and density weight; report worst bottleneck distance against L*eps.

    python scripts/stability_sweep.py --n 20 --trials 10 --eps 0.01 0.05 0.1 --lam 0 1 2 3
"""
import argparse
import json

from topofilt.criteria import CriterionConfig, lipschitz_constant
from topofilt.metric import PerturbationSpec, perturb
from topofilt.persistence import bottleneck
from topofilt.pipeline import PipelineConfig, persistence
from topofilt.samples import random_metric


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.01, 0.05, 0.1])
    ap.add_argument("--lam", type=float, nargs="+", default=[0.0, 1.0, 2.0, 3.0])
    ap.add_argument("--max-degree", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="emit rows as JSON lines")
    args = ap.parse_args()

    if not args.json:
        print(f"{'lam':>5} {'eps':>6} {'bound':>7} " + " ".join(f"{'H' + str(d):>8}" for d in range(args.max_degree + 1)) + "  ratio")
    for lam in args.lam:
        cfg = PipelineConfig(CriterionConfig(args.k, lam), max_degree=args.max_degree)
        L = lipschitz_constant(cfg.criterion)
        for eps in args.eps:
            worst = [0.0] * (args.max_degree + 1)
            for t in range(args.trials):
                D = random_metric(t, args.n)
                a = persistence(D, cfg)
                b = persistence(perturb(D, PerturbationSpec(eps, 10_000 + t)), cfg)
                for d in range(args.max_degree + 1):
                    worst[d] = max(worst[d], bottleneck(a, b, d))
            bound = L * eps
            row = {"lam": lam, "eps": eps, "bound": bound, "worst": worst, "ratio": max(worst) / bound}
            if args.json:
                print(json.dumps(row))
            else:
                print(f"{lam:5.2f} {eps:6.3f} {bound:7.3f} " + " ".join(f"{w:8.4f}" for w in worst) + f"  {row['ratio']:.3f}")


if __name__ == "__main__":
    main()
