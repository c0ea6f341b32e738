"""Core graph logic - front-end independent."""
from .models import (
    BinaryRepresentation, BlowUpPattern, Graph, GraphError, MfisCatalog,
    Outcome, Part, SearchConfig, TwinMode,
)
from .graph6 import emit_graph6, parse_graph6

# Note: solver, characterizations and mfis are imported directly
# where needed; mfis pulls in the version from the top-level package

__all__ = [
    "BinaryRepresentation",
    "BlowUpPattern",
    "Graph",
    "GraphError",
    "MfisCatalog",
    "Outcome",
    "Part",
    "SearchConfig",
    "TwinMode",
    "emit_graph6",
    "parse_graph6",
]
