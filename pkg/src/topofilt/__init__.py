"""Persistent homology of finite metric spaces through finite topologies and posets."""
from .criteria import CriterionConfig, critical_thresholds, knn_sparsity, lipschitz_constant, link_cost, step_relation
from .fields import FieldSpec
from .metric import DistanceMatrix, PerturbationSpec, PointCloud, distances_from_points, load_distance_matrix, perturb, sup_deviation
from .persistence import PersistenceDiagram, bottleneck, interleaving_witness
from .pipeline import PipelineConfig, build_stages, persistence, run, snapshot, stability_experiment

__version__ = "0.1.0"

__all__ = [
    "CriterionConfig", "critical_thresholds", "knn_sparsity", "lipschitz_constant", "link_cost", "step_relation",
    "FieldSpec",
    "DistanceMatrix", "PerturbationSpec", "PointCloud", "distances_from_points", "load_distance_matrix",
    "perturb", "sup_deviation",
    "PersistenceDiagram", "bottleneck", "interleaving_witness",
    "PipelineConfig", "build_stages", "persistence", "run", "snapshot", "stability_experiment",
]
