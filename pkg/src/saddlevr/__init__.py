"""Primal-dual accelerated dual averaging solvers for nonsmooth convex finite sums.

Deterministic full-update solver (pda2) and its O(d)-per-iteration
variance-reduced randomized variant (vrpda2), with schedule analysis, exact gap
machinery for box games, a dense reference oracle, and an experiment harness.
"""

__version__ = "0.1.0"

from .dataio import (
    LabeledDataset,
    ParseError,
    SparseRowMatrix,
    fold_labels,
    normalize_rows,
    parse_libsvm,
    remap_mnist_labels,
    to_libsvm,
)
from .pda2 import pda2_init, pda2_run, pda2_step
from .problem import (
    DomainError,
    GapProbe,
    SaddleProblem,
    box_game_problem,
    lad_problem,
    primal_value_svm,
    sup_gap_box_game,
    svm_elastic_net_problem,
)
from .prox import (
    BoxProx,
    ElasticNetProx,
    ScalarProx,
    prox_box,
    prox_elastic_net,
    prox_hinge_conjugate,
    prox_lad_conjugate,
    soft_threshold,
)
from .refsolver import ref_run
from .rng import SplitMix64
from .runner import RunConfig, TraceRecord, estimate_fstar, run_experiment, run_many
from .schedule import (
    Pda2Schedule,
    VrSchedule,
    lower_bound_Ak,
    regime_constants,
    vr_dual_weights,
)
from .vrpda2 import VrState, vr_init, vr_run, vr_step

__all__ = [name for name in dir() if not name.startswith("_")]
