"""Exact cohomology of Lie conformal algebras.

Polynomials with rational coefficients, lambda-brackets given by structure
polynomials, skew cochains sliced by generator block and degree, and exact
rank computations.  The catalog covers the Heisenberg-Virasoro algebra, the
Virasoro algebra and the central extension of the former.
"""

from .calculus import apply_differential, assemble_matrix, homotopy_residual, partial_on_cochain, tau, tau2, tau3
from .cochain import Cochain, basis_of_slice, blocks, from_names
from .cohomology import (
    BASIC,
    REDUCED,
    admissible_k,
    basic_dim,
    is_coboundary,
    reduced_dim_direct,
    reduced_dim_les,
    representatives,
    vanishing_certificate,
)
from .conformal import (
    ConformalAlgebra,
    ConformalModule,
    builtin,
    check_algebra,
    check_jacobi,
    check_module,
    check_skew_symmetry,
)
from .exactpoly import Polynomial, divide_by_linear, parse
from .extension import ExtensionSpec, build_extension, verify_extension

__version__ = "0.1.0"
