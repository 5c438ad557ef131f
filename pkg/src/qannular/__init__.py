"""Exact Khovanov-type invariants for links in the thickened annulus.

The package computes quantum annular Khovanov chain complexes and homology
over the rings Z[q, q^-1] and k_r = Z[q]/(q^r - 1), together with the
equivariant Burnside-functor refinement, elementary cobordism maps, and
the associated box realization data.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cobordism import (
    WeightScheme,
    classical_saddle,
    derive_default_scheme,
    eval_movie,
    eval_saddle,
    scheme_is_consistent,
    standardization_movie,
)
from .diagram import TangleWord, parse_word, resolve, trace_configuration
from .scalars import Cyclotomic, Laurent

__all__ = [
    "Cyclotomic",
    "Laurent",
    "TangleWord",
    "WeightScheme",
    "classical_saddle",
    "derive_default_scheme",
    "eval_movie",
    "eval_saddle",
    "parse_word",
    "resolve",
    "scheme_is_consistent",
    "standardization_movie",
    "trace_configuration",
    "__version__",
]
