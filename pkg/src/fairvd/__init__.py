"""Fair vertex-deletion toolkit: fair vertex cover over modular decompositions,
twin-cover kernels for MSO1 model checking, shape-based fair evaluation, and
hardness-reduction generators."""

from .errors import (FairVDError, FormulaSyntaxError, InvalidInputError, InvalidStateError,
                     ResourceLimitError, UnboundVariableError)
from .graph import Graph, LabeledGraph, fair_cost, is_vertex_cover, l_fair_cost

__all__ = ["Graph", "LabeledGraph", "fair_cost", "l_fair_cost", "is_vertex_cover",
           "FairVDError", "InvalidInputError", "FormulaSyntaxError", "UnboundVariableError",
           "InvalidStateError", "ResourceLimitError"]

__version__ = "0.1.0"
