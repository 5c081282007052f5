"""Causal-lattice toolkit: finite spacetimes, time-ordering combinatorics,
algebraic field-theory style checkers, and the two functorial constructions
between algebra-valued and factorization-style theories, with a free scalar
field example."""

__version__ = "0.1.0"

from .lattice import (
    CYLINDER,
    STRIP,
    CauchySurfaceGraph,
    LatticeError,
    LatticeSpacetime,
    NotCausallyConvexError,
    Region,
)

__all__ = [
    "CYLINDER",
    "STRIP",
    "CauchySurfaceGraph",
    "LatticeError",
    "LatticeSpacetime",
    "NotCausallyConvexError",
    "Region",
    "__version__",
]
