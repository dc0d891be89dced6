"""Fourier-Neumann expansions in the eigenfunctions j_n^alpha of a Bessel-type operator.

The modules build up in layers:

- ``specfun``: Bessel functions of real order and the Gamma function
- ``measure``: quadrature and L^p norms against ``x**(2 alpha + 1) dx``
- ``basis``: the system j_n^alpha, the operator L_alpha, norm growth
- ``expansion``: coefficients, partial sums, Cesaro means
- ``semigroup``: Poisson and heat semigroups, subordination, PDE residuals
- ``fractional``: the fractional integral L_alpha^(-lambda/2)
- ``hankel``: the modified Hankel transform and the multiplier M_alpha
- ``verify`` and ``cli``: verification suites and the command line
"""

__version__ = "0.1.0"

from .basis import apply_L, basis_matrix, eigenvalue, eval_jn, gram_matrix, jn_norm_model, jn_norms, p_range
from .errors import (
    BesselAccuracyWarning,
    DomainError,
    NonConvergenceError,
    QuadratureWarning,
    SingularityError,
    StepSizeError,
)
from .expansion import CoefficientVector, cesaro, expand, partial_sum, rmean
from .fractional import frac_quadrature, frac_series
from .functions import BasisCombo, Bump, Indicator, PolyExp, parse_function
from .hankel import hankel, multiplier_M
from .measure import AlphaContext, QuadratureConfig, integrate_mu, lp_norm
from .semigroup import SemigroupKind, SemigroupSpec, eval_series
from .specfun import bessel_j, bessel_j_scaled, gamma

__all__ = [
    "__version__",
    "AlphaContext",
    "QuadratureConfig",
    "integrate_mu",
    "lp_norm",
    "bessel_j",
    "bessel_j_scaled",
    "gamma",
    "eval_jn",
    "basis_matrix",
    "apply_L",
    "eigenvalue",
    "p_range",
    "gram_matrix",
    "jn_norms",
    "jn_norm_model",
    "BasisCombo",
    "Bump",
    "Indicator",
    "PolyExp",
    "parse_function",
    "CoefficientVector",
    "expand",
    "partial_sum",
    "cesaro",
    "rmean",
    "SemigroupKind",
    "SemigroupSpec",
    "eval_series",
    "frac_series",
    "frac_quadrature",
    "hankel",
    "multiplier_M",
    "DomainError",
    "NonConvergenceError",
    "SingularityError",
    "StepSizeError",
    "BesselAccuracyWarning",
    "QuadratureWarning",
]
