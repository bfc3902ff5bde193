"""snowspan: light spanners for snowflake doubling metrics, measured exactly.

Builds hierarchical nets, net-tree and path-greedy spanners, and the
charging ledger that certifies spanner lightness on snowflaked metrics;
measures stretch, lightness, hop diameter and degree exactly at desk scale.
"""

from .analysis import AnalysisReport, analyze, hop_diameter, lightness, max_degree, max_stretch
from .datasets import gen, gen_clustered, gen_grid, gen_uniform
from .ledger import (
    AuxiliaryGraph,
    HamiltonianPath,
    LedgerReport,
    LoadTable,
    PivotLevels,
    build_auxiliary_graph,
    build_pivots,
    charge_constant,
    compute_loads,
    hamiltonian_path,
    verify_ledger,
)
from .metrics import (
    MetricSummary,
    MetricView,
    PointSet,
    lp_distance,
    parse_metric,
    rescale_to_unit_min,
    snowflake_distance,
    summarize,
)
from .nets import (
    NetHierarchy,
    RadiiReport,
    build_hierarchy,
    estimate_ddim,
    sum_of_radii,
    verify_hierarchy,
)
from .spanners import SpannerGraph, gamma_for_epsilon, greedy_spanner, mst, net_tree_spanner
from .transfer import (
    Decomposition,
    TransferReport,
    check_scalar_lemma,
    check_vector_lemma,
    decompose,
    dprime,
    transfer_experiment,
)

__version__ = "0.1.0"
