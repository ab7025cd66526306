"""Extreme-eigenvalue distributions of double-Wishart random matrices.

Exact finite-n CDFs (two independent determinant routes), hard-edge limit
laws with first-order finite-size corrections, and Monte Carlo plus
quadrature machinery to validate them.
"""

__version__ = "0.1.0"

from .backend import BACKEND_NAME
from .bessel import bessel_i
from .errors import (DomainError, NumericalQualityError, OracleScaleError,
                     StatisticalPowerError, UnsupportedBranchError)
from .exact import (DistributionQuery, EnsembleParams, closed_form_cdf,
                    jacobi_route_cdf, largest_cdf, legendre_route_cdf,
                    model_cdf, pdf, smallest_cdf, smallest_moments)
from .hardedge import (bessel_expansion_residuals, corrected_cdf,
                       jue_corrected_cdf, limit_cdf, limit_pdf,
                       lue_reference_cdf, scaled_correction_density)
from .montecarlo import (CovarianceSpec, EmpiricalCDF, MCConfig, dkw_epsilon,
                         empirical_scaled_correction, ks_distance,
                         quadrature_cdf, sample_extremes)
from .numerics import ScaledMatrix, ScaledReal, det, normalize, pow_scaled
from .orthopoly import (ExactPolynomial, JacobiQuery, PolyQuery,
                        assoc_legendre, exact_legendre,
                        exact_rodrigues_derivative, jacobi, jacobi_deriv,
                        legendre, legendre_deriv, shifted_legendre)

__all__ = [name for name in dir() if not name.startswith("_")]
