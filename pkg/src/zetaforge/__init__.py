"""zetaforge: hypercube integrals reduced to exact linear forms in zeta values.

Three integral families over the unit square, cube and 4-cube reduce, via
exact series manipulation, to forms q0 + sum_a q_a zeta(a) with rational
coefficients.  The package carries the reduction pipeline, independent
numeric oracles (high-precision summation, quadrature, Monte Carlo), and
the analysis layer that certifies the decay and denominator-growth
constants governing what such forms can and cannot prove.
"""

from .exact import PolyQ, format_rational, harmonic, lcm_upto, parse_rational
from .forms import PFTerm, ZetaForm, form_combine, integerize, reduce_terms
from .reducer import FAMILIES, FamilySpec, FormCache, assemble_pieces, compute_form, inner_profile
from .series import IntegrandPiece, NonCancellingDivergence, integrate_piece, monomial_terms

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "FormCache",
    "IntegrandPiece",
    "NonCancellingDivergence",
    "PFTerm",
    "PolyQ",
    "ZetaForm",
    "__version__",
    "assemble_pieces",
    "compute_form",
    "form_combine",
    "format_rational",
    "harmonic",
    "inner_profile",
    "integerize",
    "integrate_piece",
    "lcm_upto",
    "monomial_terms",
    "parse_rational",
    "reduce_terms",
]
