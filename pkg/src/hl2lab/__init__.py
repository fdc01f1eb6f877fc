"""Symmetric HL'2 graph lifts, continuous-time quantum walks and coherence metrics."""

__version__ = "0.1.0"

from hl2lab.errors import (
    BudgetExceeded,
    ConvergenceFailure,
    EmptyGraph,
    GenerationFailed,
    InvalidParams,
    NotHermitian,
    NotNormalized,
    NotPSD,
    NotRegular,
    ParseError,
    TooLarge,
)
from hl2lab.graph import Graph
from hl2lab.generators import (
    make_complete,
    make_cycle,
    make_erdos_renyi,
    make_petersen,
    make_random_regular,
)
from hl2lab.lift import (
    BipartiteCover,
    TowerLevel,
    TowerSummary,
    bipartite_double_cover,
    hl2_lift,
    hl2_tower,
    line_graph,
)
from hl2lab.analysis import bfs_sample, connected_components, is_bipartite
from hl2lab.graphio import parse_graph, serialize_graph

__all__ = [
    "__version__",
    "BudgetExceeded",
    "ConvergenceFailure",
    "EmptyGraph",
    "GenerationFailed",
    "InvalidParams",
    "NotHermitian",
    "NotNormalized",
    "NotPSD",
    "NotRegular",
    "ParseError",
    "TooLarge",
    "Graph",
    "make_complete",
    "make_cycle",
    "make_erdos_renyi",
    "make_petersen",
    "make_random_regular",
    "BipartiteCover",
    "TowerLevel",
    "TowerSummary",
    "bipartite_double_cover",
    "hl2_lift",
    "hl2_tower",
    "line_graph",
    "bfs_sample",
    "connected_components",
    "is_bipartite",
    "parse_graph",
    "serialize_graph",
]
