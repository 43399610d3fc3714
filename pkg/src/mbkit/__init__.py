"""Exact certificates for Morse-Bott inequalities on manifolds with boundary."""

from .counting import (VerificationReport, cross_check_negation, mb_polynomial_D,
                       mb_polynomial_N, verify_corollary, verify_main)
from .descriptor import CriticalSubmanifold, MorseBottDescriptor, negate, validate
from .errors import CocycleError, FlowDataError, InputError
from .homology import CellModel, SignCocycle, poincare_polynomial, smith_normal_form
from .intpoly import IntPolynomial

__version__ = "0.1.0"
