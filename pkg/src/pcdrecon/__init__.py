"""Reconstruct routed network graphs from path correlation data (PCD)."""
from .compliance import (
    CleaningReport,
    SeparabilityPartition,
    clean,
    is_compliant,
    merge_trivial_vertex,
    separability_classes,
    separable_vertices,
    split_vertex,
    trivial_vertices,
    unused_edges,
)
from .errors import *  # noqa: F401,F403
from .generator import GeneratorParams, random_network
from .graph import (
    DEFAULT_EPS,
    NetworkGraph,
    ValidationReport,
    Violation,
    draw_out_boundary,
    is_symmetric_routing,
    path_length,
    receiver_junction,
    routes_through,
    source_junction,
    source_receiver_sets,
    validate,
)
from .pcd import (
    LogicalTree,
    PathCorrelationData,
    build_receiver_tree,
    build_source_tree,
    measure,
    validate_pcd,
)
from .reconstruct import (
    BACKEND,
    ReconstructionResult,
    available_backends,
    read_off_graph,
    reconstruct,
    reconstruct_symmetric,
)
from .verify import (
    IsomorphismWitness,
    TheoremReport,
    boundary_anchored_isomorphic,
    check_theorem,
    pcd_discrepancy,
    pcd_equal,
)

__version__ = "0.1.0"
