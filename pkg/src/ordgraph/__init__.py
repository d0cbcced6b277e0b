"""ordgraph: ordered graphs, induced-fork repair, hard instances, and testing.

The fork is the 3-vertex ordered pattern x < y < z with edges {x,y}, {x,z}
and non-edge {y,z}.  This package provides exact counting of ordered
(induced) subgraph copies, a constructive pipeline that makes a graph
induced-fork-free with a bounded number of edge edits, generators for
instances on which removal is provably expensive, ordered-graph core
computation, a polynomial-removability classifier, and a one-sided-error
property-tester simulator.
"""

from .graphs import (
    GraphFormatError,
    OrderedGraph,
    VertexSet,
    blowup,
    complement,
    fork,
    induced_subgraph,
    monotone_path,
    ordered_cycle4,
    ordered_path4,
    parse_graph,
    format_graph,
    read_graph,
    reverse,
    single_edge,
    triangle,
    write_graph,
)
from .hom import core, find_homomorphism, is_core, is_forest, is_valid_homomorphism
from .counting import (
    count_copies,
    count_induced,
    count_induced_forks,
    count_sequences,
    enumerate_copies,
    estimate_induced,
    find_induced_fork,
    induced_density,
    pack_disjoint_copies,
)
from .kernels import BACKEND as KERNEL_BACKEND

__all__ = [
    "GraphFormatError",
    "OrderedGraph",
    "VertexSet",
    "blowup",
    "complement",
    "fork",
    "induced_subgraph",
    "monotone_path",
    "ordered_cycle4",
    "ordered_path4",
    "parse_graph",
    "format_graph",
    "read_graph",
    "reverse",
    "single_edge",
    "triangle",
    "write_graph",
    "core",
    "find_homomorphism",
    "is_core",
    "is_forest",
    "is_valid_homomorphism",
    "count_copies",
    "count_induced",
    "count_induced_forks",
    "count_sequences",
    "enumerate_copies",
    "estimate_induced",
    "find_induced_fork",
    "induced_density",
    "pack_disjoint_copies",
    "KERNEL_BACKEND",
]

__version__ = "0.1.0"
