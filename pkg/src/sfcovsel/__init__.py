"""Gaussian graphical model selection under a convex scale-free prior."""
from .covsel import SolveResult, admm_covsel, prox_logdet
from .estimators import (L1GraphicalModel, ReweightedL1GraphicalModel,
                         ScaleFreeGraphicalModel, make_estimator)
from .evaluation import degree_histogram, edge_errors, roc_sweep
from .prox import ProxParams, prox_omega, prox_omega_subgrad, prox_row
from .regularizer import EdgeSet, combinatorial_F, omega, omega_subgradient
from .rewl1 import RewConfig, reweighted_l1_solve
from .weights import WeightSequence, make_weights, weight_diff

__version__ = "0.1.0"

__all__ = [
    "EdgeSet",
    "L1GraphicalModel",
    "ProxParams",
    "ReweightedL1GraphicalModel",
    "RewConfig",
    "ScaleFreeGraphicalModel",
    "SolveResult",
    "WeightSequence",
    "admm_covsel",
    "combinatorial_F",
    "degree_histogram",
    "edge_errors",
    "make_estimator",
    "make_weights",
    "omega",
    "omega_subgradient",
    "prox_logdet",
    "prox_omega",
    "prox_omega_subgrad",
    "prox_row",
    "reweighted_l1_solve",
    "roc_sweep",
    "weight_diff",
]
