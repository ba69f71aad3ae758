"""Cooperative zero-forcing over partially connected interference networks.

Build chain, grid, and hexagonal-lattice topologies; generate one-shot
zero-forcing schemes under backhaul-load constraints; verify them
numerically on random channels; search exact combinatorial oracles;
and certify upper bounds on the number of simultaneously served users.
"""

from .assignment import (
    CooperationMetrics,
    MessageAssignment,
    assignment_from_json,
    check_local_cooperation,
    metrics,
    reduce_wyner,
    validate_backhaul,
)
from .converse import (
    BackhaulConverseResult,
    CertifiedGroup,
    GroupCertificate,
    algorithm1_certify,
    appendix_receiver_set,
    backhaul_converse,
    lemma_pairwise_bounds,
    reconstructibility_check,
    toy_instance,
    triangle_state_bound,
    validate_certificate,
)
from .errors import (
    CoopZfError,
    DecompositionFailureError,
    InvalidParameterError,
    PreconditionViolationError,
    ResourceLimitError,
    SolverFailureError,
    UnsupportedError,
)
from .oracle import (
    ActivationWitness,
    AvoidanceSchedule,
    CooperativeWitness,
    certify_lower_bound,
    max_activation_for_assignment,
    max_avoidance_cooperative,
    max_avoidance_m1,
    validate_schedule,
)
from .schemes import (
    DofReport,
    ZfScheme,
    convex_combination,
    decompose_hexagonal_to_linear,
    hexagonal_cooperative_scheme,
    hexagonal_coset_scheme,
    locally_connected_scheme,
    scheme_from_json,
    scheme_to_json,
    table1_row,
    table1_scheme,
    two_dim_row_scheme,
    two_dim_scheme,
    validate_linear_decomposition,
    validate_scheme,
    wyner_backhaul_scheme,
)
from .topology import (
    HexLattice,
    NetworkTopology,
    build_hexagonal,
    build_locally_connected,
    build_two_dim,
    build_wyner,
    hexagonal_from_coords,
    interior_nodes,
    main_triangle,
    main_triangles,
    middle_triangle,
    topology_from_json,
)
from .zf_engine import (
    BeamDesign,
    ChannelRealization,
    VerificationReport,
    design_beams,
    dof_report,
    sample_channels,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationWitness",
    "AvoidanceSchedule",
    "BackhaulConverseResult",
    "BeamDesign",
    "CertifiedGroup",
    "ChannelRealization",
    "CooperationMetrics",
    "CooperativeWitness",
    "CoopZfError",
    "DecompositionFailureError",
    "DofReport",
    "GroupCertificate",
    "HexLattice",
    "InvalidParameterError",
    "MessageAssignment",
    "NetworkTopology",
    "PreconditionViolationError",
    "ResourceLimitError",
    "SolverFailureError",
    "UnsupportedError",
    "VerificationReport",
    "ZfScheme",
    "algorithm1_certify",
    "appendix_receiver_set",
    "assignment_from_json",
    "backhaul_converse",
    "build_hexagonal",
    "build_locally_connected",
    "build_two_dim",
    "build_wyner",
    "certify_lower_bound",
    "check_local_cooperation",
    "convex_combination",
    "decompose_hexagonal_to_linear",
    "design_beams",
    "dof_report",
    "hexagonal_cooperative_scheme",
    "hexagonal_coset_scheme",
    "hexagonal_from_coords",
    "interior_nodes",
    "lemma_pairwise_bounds",
    "locally_connected_scheme",
    "main_triangle",
    "main_triangles",
    "max_activation_for_assignment",
    "max_avoidance_cooperative",
    "max_avoidance_m1",
    "metrics",
    "middle_triangle",
    "reconstructibility_check",
    "reduce_wyner",
    "sample_channels",
    "scheme_from_json",
    "scheme_to_json",
    "table1_row",
    "table1_scheme",
    "topology_from_json",
    "toy_instance",
    "triangle_state_bound",
    "two_dim_row_scheme",
    "two_dim_scheme",
    "validate_backhaul",
    "validate_certificate",
    "validate_linear_decomposition",
    "validate_scheme",
    "validate_schedule",
    "verify",
    "wyner_backhaul_scheme",
]
