"""Numerical toolkit for Laguerre and Bessel (Hankel) harmonic analysis on the half-line:
special functions, quadrature, generalized translations and convolutions, the Laguerre
linearization coefficients, and sampled precompactness diagnostics for families."""
from ._exceptions import DomainError, NumericalError, QuadratureWarning, TailWarning
from .special import (binomial_weight, binomial_weights, laguerre, normalized_bessel,
                      normalized_bessel_derivative, normalized_laguerre, normalized_laguerre_table)
from .spaces import (BESSEL_FN, LAGUERRE_FN, LAGUERRE_SEQ, GridFunction, NormSpec, SeqVec, norm)
from .laguerre import CoeffVec, LaguerreTranslationParams, analyze, convolve_laguerre, synthesize, translate_laguerre
from .sequences import LinearizationTable, build_linearization_table, convolve_seq, linearization_coeff, translate_seq
from .bessel import HankelParams, convolve_bessel, hankel, hankel_inverse, translate_bessel
from .compactness import DiagnosticsConfig, DiagnosticsReport, FamilySpec, verdict

__version__ = "0.1.0"
