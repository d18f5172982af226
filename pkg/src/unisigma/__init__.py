"""One-neuron universal approximation with an explicitly constructed sigmoid."""
from .enumeration import (Placement, calkin_wilf, index_of_polynomial, polynomial_at,
                          position_of, position_of_positive, rational_at, stern)
from .exactnum import (ContinuedFraction, cf_even, cf_from_rational, rational_from_cf,
                       simplest_rational_in)
from .network import ErrorReport, Network, eval_network, sup_error
from .polynomial import RationalPolynomial
from .sigma import SigmaFunction, SigmaParams, bump, h, piece_coefficients, sigma_eval, transition
from .solver import NeuronParams, TargetFunction, bernstein, round_coefficients, sikkema_n, solve

__version__ = "0.1.0"
