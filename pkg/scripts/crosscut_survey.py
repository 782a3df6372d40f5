#!/usr/bin/env python3
"""How often the maximal-element crosscut is valid along real filtrations, and whether it agrees.

Walks every stage of several planted clouds and tallies validity and Betti agreement.
"""
import argparse
import logging
from collections import Counter

from topofilt.criteria import CriterionConfig
from topofilt.pipeline import PipelineConfig, build_stages
from topofilt.samples import random_metric


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--inputs", type=int, default=10)
    ap.add_argument("--lam", type=float, default=2.0)
    args = ap.parse_args()
    logging.getLogger("topofilt").setLevel(logging.ERROR)
    tally = Counter()
    cfg = PipelineConfig(CriterionConfig(2, args.lam), mode="crosscut-auto")
    for seed in range(args.inputs):
        for st in build_stages(random_metric(seed, args.n), cfg):
            r = st.crosscut
            key = {True: "valid", False: "invalid", None: "unchecked"}[r.valid]
            tally[key] += 1
            if r.valid is False:
                tally["invalid, Betti differ" if not r.agrees else "invalid, Betti agree"] += 1
            elif r.valid and not r.agrees:
                tally["VALID BUT DISAGREE"] += 1
    width = max(map(len, tally))
    for k, v in sorted(tally.items()):
        print(f"{k:<{width}}  {v}")


if __name__ == "__main__":
    main()
