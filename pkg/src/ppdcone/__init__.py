"""Positive positive-definite radial functions.

Exact and numerical tools for the cone of functions that are both
nonnegative and positive definite: a catalogue of radial profiles, radial
Fourier transforms in any dimension, sampling criteria (Polya, Gneiting,
complete monotonicity) and extremality certificates based on the zeros of
the transform's entire extension.

The hot loops live in a compiled extension; :func:`backend` reports which
implementation is active and :func:`use_backend` switches between them.
"""

from . import _backend
from ._backend import available as available_backends
from ._backend import current as backend
from ._backend import use_backend
from .criteria import (POLYA_SPECTRAL_CONSTANT, Verdict, check_completely_monotone,
                       check_gneiting, check_nonneg, check_polya, check_posdef_fourier,
                       check_posdef_gram, gneiting_function, polya_kernel,
                       polya_spectral_density, recover_polya_measure)
from .descriptors import DescriptorError, build
from .errors import (ContourError, DomainError, NoSolution, PPDError, PreconditionError,
                     RangeError, SmoothnessError, UnsupportedOperation)
from .extremal import (Certificate, ZeroReport, certify_compact, certify_hermite,
                       classify_hermite4, find_zeros, not_extremal_mixture, recover_zeta,
                       solve_double_zero)
from .funcs import (GaussianTimesPoly, HermiteQuartic, PiecewisePoly, RadialFunction,
                    ScaleMeasure, convolve, derivative, exp_pow, gaussian, inverse_multiquadric,
                    linnik, make_f_zeta, make_hermite_quartic, make_indicator_conv, make_m_alpha,
                    make_m_alpha_sq, make_phi, make_wu, mixture, product, scale, wendland33)
from .specfun import bessel_j, bessel_kernel, calJ, calJ_derivative, gamma
from .transform import analytic_extension, fourier_radial, hermite_transform

__version__ = "0.1.0"

__all__ = [name for name, obj in dict(globals()).items()
           if not name.startswith("_") and not isinstance(obj, type(_backend))]
