"""Exact computation and simulation for exchangeable random graphs driven by a
Poisson point process on the subset lattice."""

from .lattice import (
    FAMILY_SPACE_CAP,
    POWERSET_CAP,
    GeneratingClass,
    Graph,
    Permutation,
    ResourceCapError,
    SubsetFamily,
    all_antichains,
    all_families,
    all_masks,
    clique_graph,
    elements_of,
    full_mask,
    leq_family,
    leq_generating_class,
    leq_graph,
    mask_leq,
    mask_of,
    monotone_cover,
    permute_family,
    permute_generating_class,
    permute_graph,
    preimage_sup,
    restrict_family,
    restrict_generating_class,
    restrict_graph,
    restrict_mask,
)
from .schedules import (
    BetaUniformSchedule,
    ConsistencyReport,
    GeometricSchedule,
    MomentAtomsSchedule,
    RateSchedule,
    TableSchedule,
    check_consistency,
    constant_table,
    derive_lower,
    from_moment_measure,
    schedule_from_dict,
    schedule_to_dict,
)
from .inference import (
    CLIQUE_SUBSET_CAP,
    GRAPH_ENUM_CAP,
    CliqueSet,
    CoverEnumeration,
    InconsistentEvidenceError,
    classify_extension,
    clique_set,
    cluster_prob,
    coarse_cluster_prob,
    enumerate_monotone_covers,
    exchangeability_discrepancy,
    family_point_prob,
    graph_law,
    graph_prob,
    interval_prob,
    marginal_restriction_check,
    transitivity_conditional,
)
from .sampling import (
    PipelineSample,
    PointProcessRealization,
    sample_graph_batch,
    sample_pipeline,
    sample_point_process,
    support,
)

__version__ = "0.1.0"
