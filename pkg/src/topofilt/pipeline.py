"""Metric -> relations -> posets -> cores -> order complexes -> barcodes."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .complexes import SimplicialComplex, crosscut_complex, order_complex, vertex_map_of_monotone
from .criteria import CriterionConfig, cost_matrix, critical_thresholds, lipschitz_constant
from .errors import CapExceeded
from .fields import FieldSpec
from .finite_space import Preorder, QuotientResult, add_pairs, coarsening_map, t0_quotient
from .homology import HomologyBasis, InducedMatrix, homology, induced_matrix
from .metric import DistanceMatrix, PerturbationSpec, perturb
from .persistence import (
    PersistenceDiagram,
    PersistenceModule,
    bottleneck,
    interval_multiplicities,
    rank_function,
    to_diagram,
)
from .poset import DEFAULT_SUBSET_CAP, CoreResult, conjugate_map, core, crosscut_valid, maximal_elements, trivial_core

log = logging.getLogger(__name__)

STABILITY_TOL = 1e-9


@dataclass(frozen=True)
class PipelineConfig:
    criterion: CriterionConfig = field(default_factory=CriterionConfig)
    field: FieldSpec = field(default_factory=FieldSpec)
    max_degree: int = 2
    mode: str = "order"  # or "crosscut-auto"
    simplex_cap: int | None = None
    subset_cap: int = DEFAULT_SUBSET_CAP
    reduce_cores: bool = True

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if self.mode not in ("order", "crosscut-auto"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class CrosscutReport:
    valid: bool | None
    certificate: tuple[int, ...] | None
    betti: tuple[int, ...] | None
    agrees: bool | None


@dataclass(frozen=True, eq=False)
class FiltrationStage:
    t: float
    preorder: Preorder
    quotient: QuotientResult
    core: CoreResult
    complex: SimplicialComplex
    homology: HomologyBasis
    crosscut: CrosscutReport | None = None

    @property
    def betti(self) -> tuple[int, ...]:
        return self.homology.betti


def _pad(b, n):
    return tuple(b[:n]) + (0,) * max(0, n - len(b))


def crosscut_report(quotient: QuotientResult, order_betti: Sequence[int], cfg: PipelineConfig) -> CrosscutReport:
    P = quotient.poset
    C = maximal_elements(P)
    chk = crosscut_valid(P, C, cfg.subset_cap)
    betti = None
    try:
        K = crosscut_complex(P, C, cfg.simplex_cap)
        betti = _pad(homology(K, cfg.field, cfg.max_degree).betti, cfg.max_degree + 1)
    except CapExceeded:
        log.warning("crosscut complex exceeds cap; using order complex only")
    agrees = None if betti is None else betti == _pad(order_betti, cfg.max_degree + 1)
    if chk.valid is None:
        log.warning("crosscut validity undetermined within subset cap; using order complex only")
    elif not chk.valid:
        log.warning("maximal elements violate the crosscut meet condition at %s; using order complex only",
                    chk.certificate)
    return CrosscutReport(chk.valid, chk.certificate, betti, agrees)


def make_stage(t: float, rel: np.ndarray, cfg: PipelineConfig, with_crosscut: bool | None = None) -> FiltrationStage:
    pre = Preorder(rel)
    q = t0_quotient(pre)
    c = core(q.poset) if cfg.reduce_cores else trivial_core(q.poset)
    K = order_complex(c.core, cfg.simplex_cap)
    H = homology(K, cfg.field, cfg.max_degree)
    cross = None
    if with_crosscut if with_crosscut is not None else cfg.mode == "crosscut-auto":
        cross = crosscut_report(q, H.betti, cfg)
    return FiltrationStage(float(t), pre, q, c, K, H, cross)


def build_stages(D: DistanceMatrix, cfg: PipelineConfig) -> list[FiltrationStage]:
    """One stage per critical threshold.

    Stages whose transitive closure did not change share all their data with
    the previous stage (only ``t`` differs).
    """
    cost = cost_matrix(D, cfg.criterion)
    grid = critical_thresholds(D, cfg.criterion, cost)
    n = D.n
    iu = np.argwhere(~np.eye(n, dtype=bool))
    order = np.argsort(cost[iu[:, 0], iu[:, 1]], kind="stable")
    pairs = iu[order]
    costs = cost[pairs[:, 0], pairs[:, 1]]
    rel = np.eye(n, dtype=bool)
    stages: list[FiltrationStage] = []
    ptr = 0
    for t in grid:
        hi = int(np.searchsorted(costs, t, side="right"))
        new = add_pairs(rel, pairs[ptr:hi]) if hi > ptr else rel
        ptr = hi
        if stages and np.array_equal(new, rel):
            stages.append(replace(stages[-1], t=float(t)))
            continue
        rel = new
        stages.append(make_stage(t, rel, cfg))
    return stages


def _identity(stage: FiltrationStage) -> InducedMatrix:
    return InducedMatrix(tuple(np.eye(b, dtype=np.int64) for b in stage.homology.betti))


def stage_map(src: FiltrationStage, dst: FiltrationStage, check: bool = False) -> InducedMatrix:
    """Homology map induced by the identity on points from ``src`` to ``dst``.

    Requires the preorder of ``src`` to be contained in that of ``dst``.
    """
    if src.quotient is dst.quotient:
        return _identity(src)
    f = coarsening_map(src.quotient, dst.quotient)
    g = conjugate_map(f, src.core, dst.core)
    vm = vertex_map_of_monotone(g, src.complex, dst.complex)
    return induced_matrix(vm, src.homology, dst.homology, check=check)


def structure_maps(stages: Sequence[FiltrationStage], check: bool = False) -> list[InducedMatrix]:
    return [stage_map(a, b, check) for a, b in zip(stages, stages[1:])]


def modules(stages: Sequence[FiltrationStage], maps: Sequence[InducedMatrix], p: int) -> list[PersistenceModule]:
    grid = np.array([s.t for s in stages])
    top = stages[0].homology.max_dim
    return [
        PersistenceModule(grid, tuple(s.homology.betti[n] for s in stages), tuple(m[n] for m in maps), p)
        for n in range(top + 1)
    ]


@dataclass(frozen=True, eq=False)
class PipelineResult:
    stages: list
    modules: list
    diagram: PersistenceDiagram

    @property
    def total_simplices(self) -> int:
        seen, total = set(), 0
        for s in self.stages:
            if id(s.complex) not in seen:
                seen.add(id(s.complex))
                total += len(s.complex)
        return total


def run(D: DistanceMatrix, cfg: PipelineConfig = PipelineConfig()) -> PipelineResult:
    stages = build_stages(D, cfg)
    mods = modules(stages, structure_maps(stages), cfg.field.p)
    grid = [s.t for s in stages]
    points = {n: to_diagram(interval_multiplicities(rank_function(M)), grid) for n, M in enumerate(mods)}
    return PipelineResult(stages, mods, PersistenceDiagram(points, cfg.field.p))


def persistence(D: DistanceMatrix, cfg: PipelineConfig = PipelineConfig()) -> PersistenceDiagram:
    return run(D, cfg).diagram


@dataclass(frozen=True)
class StabilityReport:
    epsilon: float
    lipschitz: float
    trials: int
    max_distance: dict  # degree -> max bottleneck distance over trials
    bound: float
    passed: bool
    seed: int = 0

    def to_json(self) -> str:
        import json

        doc = {
            "epsilon": self.epsilon,
            "lipschitz": self.lipschitz,
            "bound": self.bound,
            "trials": self.trials,
            "seed": self.seed,
            "max_distance": {str(k): (None if math.isinf(v) else v) for k, v in sorted(self.max_distance.items())},
            "pass": self.passed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)]


def _trial(args) -> dict:
    D, cfg, base, epsilon, s = args
    other = persistence(perturb(D, PerturbationSpec(epsilon, s)), cfg)
    return {n: bottleneck(base, other, n) for n in range(cfg.max_degree + 1)}


def stability_experiment(D: DistanceMatrix, cfg: PipelineConfig, epsilon: float, trials: int,
                         seed: int = 0, parallel: int = 1) -> StabilityReport:
    """Perturb ``D`` by at most ``epsilon`` and compare barcodes against ``L * epsilon``."""
    if epsilon < 0 or trials < 1:
        raise ValueError("need epsilon >= 0 and trials >= 1")
    L = lipschitz_constant(cfg.criterion)
    base = persistence(D, cfg)
    jobs = [(D, cfg, base, epsilon, s) for s in trial_seeds(seed, trials)]
    if parallel > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(_trial, jobs))
    else:
        results = [_trial(j) for j in jobs]
    worst = {n: max(r[n] for r in results) for n in range(cfg.max_degree + 1)}
    bound = L * epsilon
    passed = all(v <= bound + STABILITY_TOL for v in worst.values())
    return StabilityReport(float(epsilon), L, trials, worst, bound, passed, seed)


def stage_at(D: DistanceMatrix, cfg: PipelineConfig, t: float) -> FiltrationStage:
    """The single stage at the largest grid value not exceeding ``t``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    cost = cost_matrix(D, cfg.criterion)
    grid = critical_thresholds(D, cfg.criterion, cost)
    tg = float(grid[np.searchsorted(grid, t, side="right") - 1])
    rel = add_pairs(np.eye(D.n, dtype=bool), np.argwhere(cost <= tg))
    return make_stage(tg, rel, cfg, with_crosscut=True)


def snapshot(D: DistanceMatrix, cfg: PipelineConfig, t: float) -> dict:
    st = stage_at(D, cfg, t)
    P = st.quotient.poset
    deg = cfg.max_degree + 1
    order_betti = _pad(st.betti, deg)
    cross = st.crosscut
    return {
        "t": t,
        "grid_t": st.t,
        "poset": {"size": P.m, "classes": [list(c) for c in P.element_tags], "hasse": [list(e) for e in P.hasse_edges()]},
        "core": {
            "size": st.core.core.m,
            "elements": list(st.core.inclusion.f),
            "removed": [[x, kind, y] for x, kind, y in st.core.removal_log],
        },
        "order_betti": list(order_betti),
        "crosscut": {
            "maximal_elements": list(maximal_elements(P).elements),
            "valid": cross.valid,
            "certificate": None if cross.certificate is None else list(cross.certificate),
            "betti": None if cross.betti is None else list(cross.betti),
        },
        "disagreement": bool(cross.betti is not None and cross.betti != order_betti),
    }
