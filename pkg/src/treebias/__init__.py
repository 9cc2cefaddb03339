"""Friendship-bias vertex types on finite trees and Galton-Watson trees.

The sign of a vertex's friendship-bias (average neighbour degree minus
own degree) partitions a tree into positive, neutral and negative
vertices.  This package computes those types exactly on finite trees,
checks a claimed lower bound for N+ - N- by exhaustive enumeration and
by replaying an incremental exploration construction, evaluates the
limiting type densities and edge-type correlations of Galton-Watson
trees by exact convolution, and estimates the same quantities by seeded
Monte Carlo.
"""

from .densities import (
    DensityReport,
    MonoResult,
    MonoVerdict,
    MonoWitness,
    Significance,
    SignSplit,
    classify_significance,
    correlation_gap,
    density_report,
    edge_densities,
    lemma31_check,
    mono_condition,
    parent_marginal,
    poisson_tail_f,
    scan_poisson_mono,
    sign_statistic_pmf,
    vertex_densities,
)
from .errors import (
    AllExtinct,
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    DuplicateKey,
    HypothesisNotMet,
    InsufficientDepth,
    InvalidRate,
    MemoryCapExceeded,
    NegativeWeight,
    NoBranchingPoint,
    NotNormalized,
    SizeOutOfRange,
    TreeBiasError,
    UnknownRoot,
    UnknownVertex,
    ZeroMean,
)
from .finite import (
    ExhaustiveSummary,
    ExplorationTrace,
    StepCase,
    StepRecord,
    TheoremReport,
    branching_lower_bound,
    enumerate_labeled_trees,
    exhaustive_check,
    exploration_construction,
    prufer_to_edges,
    random_labeled_tree,
    verify_theorem,
)
from .pmf import (
    DiscretePmf,
    GWConditionReport,
    OffspringPmf,
    SizeBiasedPmf,
    SumPmf,
    convolve_power,
    make_pmf,
    mean,
    poisson_truncated,
    size_biased,
    validate_gw_conditions,
)
from .simulate import (
    SampledTree,
    SimEstimate,
    TraceRow,
    classify_to_depth,
    convergence_trace,
    estimate_densities,
    estimate_edge_densities,
    export_colored_dot,
    sample_tree,
    types_as_map,
)
from .trees import (
    Tree,
    TypeCounts,
    VertexType,
    average_bias,
    bias_numerator,
    build_tree,
    reroot,
    type_counts,
    vertex_type,
    vertex_types,
)

__version__ = "1.0.0"
