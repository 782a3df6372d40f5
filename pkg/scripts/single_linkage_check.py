#!/usr/bin/env python3
"""Compare degree-0 deaths at lam=0 with scipy's single-linkage merge heights."""
import argparse

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from topofilt.criteria import CriterionConfig
from topofilt.pipeline import PipelineConfig, persistence
from topofilt.samples import uniform_cloud


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--clouds", type=int, default=10)
    args = ap.parse_args()
    cfg = PipelineConfig(CriterionConfig(1, 0.0), max_degree=0)
    worst = 0.0
    for seed in range(args.clouds):
        D = uniform_cloud(seed, args.n)
        deaths = sorted(d for _, d in persistence(D, cfg).expanded(0) if np.isfinite(d))
        heights = sorted(linkage(squareform(D.entries, checks=False), method="single")[:, 2])
        err = float(np.max(np.abs(np.array(deaths) - np.array(heights))))
        worst = max(worst, err)
        print(f"seed {seed:3d}: {len(deaths)} finite bars, max |death - height| = {err:.3e}")
    print(f"worst deviation {worst:.3e}")


if __name__ == "__main__":
    main()
