"""Random regular uniform hypergraphs: switchings, samplers, subgraph
census, spanning cycles, and query-model freeness testers."""

from .core import (
    DivisibilityError,
    DuplicateEdgeError,
    EdgeArityError,
    Hypergraph,
    HypergraphError,
    InfeasibleError,
    ParseError,
    TooLargeError,
    VertexOutOfRangeError,
    edge_key,
    parse,
    regular_class_feasible,
    serialize,
)
from . import census, cli, sampling, spanning, switching, testers

__version__ = "0.1.0"

__all__ = [
    "Hypergraph",
    "HypergraphError",
    "EdgeArityError",
    "DuplicateEdgeError",
    "VertexOutOfRangeError",
    "ParseError",
    "InfeasibleError",
    "DivisibilityError",
    "TooLargeError",
    "edge_key",
    "parse",
    "serialize",
    "regular_class_feasible",
    "census",
    "cli",
    "sampling",
    "spanning",
    "switching",
    "testers",
    "__version__",
]
