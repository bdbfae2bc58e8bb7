"""forcelab: zero forcing processes, relaxed schedules, path-cover
certificates, time-slice constructions, path bundles, and exhaustive
parameter solvers for small graphs."""

from .errors import (
    BundleError,
    CapExceeded,
    ChronologyError,
    ForcelabError,
    GraphFormatError,
    InfeasibleError,
    InvariantViolation,
    WitnessError,
)
from .forcing import (
    Force,
    ForcingCover,
    PropagationResult,
    RelaxedChronology,
    Rule,
    active_times,
    activity_spans,
    forcing_cover,
    possible_forces,
    propagate,
    propagation_time_of_forces,
    restriction_initials,
    reversal,
    terminus,
    validate_chronology,
)
from .graphs import (
    Graph,
    Subgraph,
    boundary,
    closed_neighborhood,
    complete_graph,
    components,
    cycle_graph,
    empty_graph,
    graph6_decode,
    graph6_encode,
    grid_graph,
    induced_subgraph,
    is_vertex_cut,
    load_graph,
    parse_edge_list,
    path_graph,
    petersen_graph,
    star_graph,
    to_dot,
    validate_path_cover,
)
from .pips import (
    BlockPartition,
    PipWitness,
    chronology_to_witness,
    generate_family,
    pip_number,
    pip_number_by_search,
    verify_witness,
    witness_to_chronology,
)
from .slices import (
    check_interval_forcing,
    interval_slice,
    power_set_from_slice,
    psd_set_from_slices,
    time_slice,
)
from .bundles import (
    PathBundle,
    Restriction,
    RlCertificate,
    certify_rigid_linkage,
    find_linkages,
    induced_path_bundle,
    psd_reversal,
    relocate_psd_set,
    restrict,
    validate_path_bundle,
)
from .solvers import (
    ParameterReport,
    atlas_stream,
    forcing_number,
    propagation_time_m,
    solve_parameter,
    sweep_bounds,
    throttling,
)

__version__ = "0.1.0"
