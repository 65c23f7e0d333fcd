"""Spanning-tree packings, coverings and decompositions of multigraphs."""

from .coverpack import (
    DensityCertificate,
    ForestCover,
    PartitionWitness,
    TreeCertificate,
    covering,
    eh_forest_cover,
    extend_to_spanning_trees,
    forest_partition,
    max_packing_size,
    max_tree_packing,
    min_cover_number,
    nash_williams_check,
    verify_certificate,
)
from .errors import (
    InputError,
    InvariantViolation,
    NoEligibleTree,
    PreconditionError,
    ResourceError,
    SpanTreeError,
    WindowViolation,
)
from .exchange import (
    attach_bond_monitor,
    choose_tree,
    exchange_step,
    init_state,
    invariant_report,
    run_finite,
)
from .graph import (
    MultiGraph,
    contract,
    crosses_bond,
    edge_connectivity,
    fundamental_cycle,
    is_spanning_tree,
)
from .lazy import (
    closure_budgeted,
    comb_star,
    doubled_ray,
    materialize,
    multiplied_ray,
    run_budgeted,
)
from .ordering import (
    GoodOrdering,
    back_edge_partition,
    build_edge_order,
    colouring_number,
    degeneracy_ordering,
    verify_good_ordering,
)

__version__ = "0.1.0"
