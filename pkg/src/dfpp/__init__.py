"""Directed (northeast) first-passage percolation on the square lattice.

Simulation of directed passage times, oriented-percolation right-edge
machinery, time-constant estimation across the phase transition, and the
directed cell-growth model.
"""

__version__ = "0.1.0"

from .distributions import (  # noqa: F401
    Bernoulli01,
    CoupledPair,
    DiscreteAtoms,
    EdgeTimeDistribution,
    Exponential,
    GEpsilonSpec,
    Shifted,
    build_g_n,
    couple_g_epsilon,
    from_json,
    sample,
    stochastically_dominates,
    to_json,
)
from .estimators import (  # noqa: F401
    MuEstimate,
    PhaseBudget,
    PhaseReport,
    TailEstimate,
    classify_phase,
    convexity_check,
    critical_divergence,
    estimate_mu,
    moment_plateau,
    sigma_tail,
    tail_probability,
)
from .growth import GrowthState, VertexClockField, fpp_growth, growth_step, run_growth  # noqa: F401
from .lattice import EdgeField, GridSpec, PolarPoint, generate_field, nearest_vertex  # noqa: F401
from .oriented import (  # noqa: F401
    EXCEEDED,
    NEG_INF,
    ConeEstimate,
    FrontState,
    Inconclusive,
    PcEstimate,
    RightEdgeTrace,
    cluster_size,
    cone_angles,
    estimate_cone,
    estimate_pc,
    evolve_front,
    right_edge_trace,
    slope_connectivity,
)
from .passage import (  # noqa: F401
    BallTruncated,
    DirectedSet,
    PassageField,
    RayTruncated,
    TauField,
    ball,
    boundaries,
    compute_passage,
    compute_tau,
    optimal_path,
    shape_boundary_radius,
)
