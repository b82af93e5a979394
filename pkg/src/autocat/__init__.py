"""Free autonomous categories as rewritable string diagrams.

Diagrams over a pluggable strict monoidal category, a rewriting engine that
decides equality (tri-state), evaluation into matrices, and a pregroup
grammar front end.
"""

from .diagram import (Box, Cap, Cup, Diagram, SignedObject, Wire, adjunction_iso, assoc_iso,
                      box_diagram, cap, compose, cup, identity_diagram, interface,
                      left_adjoint, right_adjoint, snake_eps, snake_eta, tensor)
from .errors import (AutocatError, InterfaceMismatch, InvalidDiagram, ModelMismatch,
                     ParseError, ShapeMismatch, Uninterpretable)
from .functors import (StrongMonoidalFunctor, cartesian_no_adjoint_witness, check_triangle_L,
                       embed, map_diagram, value)
from .models import (AffDirectSum, Affine, CategoryModel, FreeSignature, Gen, Mat, MatTensor,
                     Net, NetSigma, Signature, TriState, aff_compose, aff_direct_sum,
                     mat_tensor, net_apply)
from .pregroup import (Reduction, find_reduction, parse_type, reduction_to_diagram,
                       sentence_meaning)
from .rewrite import count_nodes, equal, normalize

__all__ = [
    "AffDirectSum", "Affine", "AutocatError", "Box", "Cap", "CategoryModel", "Cup", "Diagram",
    "FreeSignature", "Gen", "InterfaceMismatch", "InvalidDiagram", "Mat", "MatTensor",
    "ModelMismatch", "Net", "NetSigma", "ParseError", "Reduction", "ShapeMismatch",
    "Signature", "SignedObject", "StrongMonoidalFunctor", "TriState", "Uninterpretable", "Wire",
    "adjunction_iso", "aff_compose", "aff_direct_sum", "assoc_iso", "box_diagram", "cap",
    "cartesian_no_adjoint_witness", "check_triangle_L", "compose", "count_nodes", "cup",
    "embed", "equal", "find_reduction", "identity_diagram", "interface", "left_adjoint",
    "map_diagram", "mat_tensor", "net_apply", "normalize", "parse_type",
    "reduction_to_diagram", "right_adjoint", "sentence_meaning", "snake_eps", "snake_eta",
    "tensor", "value",
]
