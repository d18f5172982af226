"""Parameters ``(c0, c1, theta)`` of a one-neuron network for a Lipschitz target.

Pipeline: rescale to [0, 1], pick the Bernstein degree from Sikkema's bound,
expand the Bernstein polynomial exactly, round its coefficients to simple
rationals, locate the result in the polynomial enumeration and read off the
affine coefficients of the matching sigma piece.
"""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .enumeration import DEFAULT_BIT_BUDGET, Placement, index_of_polynomial
from .exactnum import as_fraction, simplest_rational_in
from .polynomial import RationalPolynomial, _lcm
from .sigma import PieceCoefficients, SigmaParams, piece_coefficients

CHI = (4306 + 837 * math.sqrt(6)) / 5832


class LipschitzWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TargetFunction:
    """``f`` on ``[a, b]`` with a caller-supplied Lipschitz constant.

    The evaluator may receive Fractions; returning an int or Fraction keeps
    the Bernstein samples exact.
    """

    evaluator: Callable
    a: Fraction
    b: Fraction
    lipschitz: float

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        if a >= b:
            raise ValueError(f"need a < b, got [{a}, {b}]")
        if not self.lipschitz > 0:
            raise ValueError(f"Lipschitz constant must be positive, got {self.lipschitz}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, x):
        return self.evaluator(x)

    def spot_check(self, pairs: int = 1000, seed: int = 0) -> float:
        """Largest sampled ``|f(x) - f(y)| / |x - y|``; warns above the claimed constant."""
        rng = random.Random(seed)
        a, b = float(self.a), float(self.b)
        worst = 0.0
        for _ in range(pairs):
            x, y = rng.uniform(a, b), rng.uniform(a, b)
            if x == y:
                continue
            worst = max(worst, abs(float(self(x)) - float(self(y))) / abs(x - y))
        if worst > self.lipschitz * (1 + 1e-9):
            warnings.warn(f"sampled slope {worst:.6g} exceeds Lipschitz constant "
                          f"{self.lipschitz:.6g}", LipschitzWarning, stacklevel=2)
        return worst


@dataclass(frozen=True)
class SymbolicTheta:
    """``theta = alpha a/(b-a) + (1 - 2m) alpha`` with ``m`` too large to write out."""

    alpha: Fraction
    a: Fraction
    b: Fraction
    placement: Placement

    def __str__(self):
        return "symbolic"

    def log2_magnitude(self):
        """``log2 |theta|`` as an mpmath number; ``theta`` itself may overflow any float format.

        ``|theta| = alpha |2m - 1 - a/(b-a)|``; once ``m`` is far beyond the
        working precision only the ``2m`` term matters.
        """
        alpha = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        log2m = self.placement.log2_index()
        if log2m > mpmath.mp.prec + 64:
            return log2m + 1 + mpmath.log(alpha, 2)
        ratio = mpmath.mpf(self.a.numerator) / self.a.denominator / _mpq(self.b - self.a)
        return mpmath.log(alpha * abs(2 * mpmath.power(2, log2m) - 1 - ratio), 2)


@dataclass(frozen=True)
class NeuronParams:
    """``x -> c0 + c1 sigma(w x - theta)`` approximating the target within ``epsilon``."""

    c0: object
    c1: object
    w: Fraction
    theta: Fraction | SymbolicTheta
    placement: Placement
    epsilon: float
    a: Fraction
    b: Fraction
    sigma_params: SigmaParams
    bernstein_degree: int
    piece: PieceCoefficients

    @property
    def polynomial(self) -> RationalPolynomial:
        return self.placement.polynomial

    @property
    def is_symbolic(self) -> bool:
        return not self.placement.is_numeric

    @property
    def m(self) -> int | None:
        return self.placement.numeric_index

    @property
    def s(self) -> Fraction | None:
        if self.m is None:
            return None
        return (1 - 2 * self.m) * self.sigma_params.alpha


def to_unit(f: TargetFunction) -> tuple[Callable, float]:
    """``g(t) = f(a + (b-a) t)`` on [0, 1] and its Lipschitz constant ``L (b-a)``."""
    a, b = f.a, f.b
    span = b - a

    def g(t):
        if isinstance(t, (int, Fraction)):
            return f(a + span * t)
        return f(float(a) + float(span) * t)

    return g, f.lipschitz * float(span)


def sikkema_n(L1: float, eps: float) -> int:
    """Smallest ``n`` with ``chi L1 / sqrt(n) <= eps / 2``."""
    if not (L1 > 0 and eps > 0):
        raise ValueError(f"need L1 > 0 and eps > 0, got {L1}, {eps}")
    return max(1, math.ceil((2 * CHI * L1 / eps) ** 2))


def _sample(g: Callable, t: Fraction, snap: Fraction | None) -> Fraction:
    v = g(t)
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"target returned non-finite value {v} at t={t}")
    if snap is None:
        return Fraction(v)
    return simplest_rational_in(Fraction(v) - snap, Fraction(v) + snap)


def bernstein(g: Callable, n: int, *, snap=None) -> RationalPolynomial:
    """Monomial expansion of the n-th Bernstein polynomial of ``g``.

    Float samples are replaced by the simplest rational within ``snap`` (or
    their exact binary value when ``snap`` is None); exact samples are kept.
    The i-th coefficient is ``C(n, i)`` times the i-th forward difference of
    the samples, computed in integers.
    """
    if n < 1:
        raise ValueError(f"Bernstein degree must be >= 1, got {n}")
    snap = None if snap is None else as_fraction(snap)
    samples = [_sample(g, Fraction(k, n), snap) for k in range(n + 1)]
    den = _lcm(s.denominator for s in samples)
    diffs = np.array([s.numerator * (den // s.denominator) for s in samples], dtype=object)
    coeffs = [Fraction(int(diffs[0]), den)]
    for i in range(1, n + 1):
        diffs = diffs[1:] - diffs[:-1]
        coeffs.append(Fraction(math.comb(n, i) * int(diffs[0]), den))
    return RationalPolynomial.trimmed(coeffs)


def round_coefficients(B: RationalPolynomial, eps) -> RationalPolynomial:
    """Simplest rationals ``d_i`` with ``sum |a_i - d_i| <= eps/2``."""
    if B.is_zero:
        return B
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    window = eps / (2 * len(B.coefficients))
    return RationalPolynomial.trimmed(
        simplest_rational_in(c - window, c + window) for c in B.coefficients)


def network_coefficients(piece: PieceCoefficients) -> tuple[object, object]:
    """``(c0, c1)`` with ``c0 + c1 (a_m + b_m u_m) = u_m`` (or ``d0`` when constant)."""
    if piece.is_constant:
        d0 = piece.polynomial.coefficient(0)
        d0 = mpmath.mpf(d0.numerator) / d0.denominator if isinstance(piece.a, mpmath.mpf) \
            else d0.numerator / d0.denominator
        return d0 - piece.a, piece.a * 0 + 1
    # 1/b_m and -a_m/b_m, rearranged so the huge terms never cancel
    spread = piece.A2 - piece.A1
    three_spread, lin = 3 * spread, 2 * piece.A2 - piece.A1
    if isinstance(piece.gap, mpmath.mpf):
        c1 = _mpq(three_spread) / piece.gap
        return _mpq(lin) - c1, c1
    c1 = float(three_spread) / piece.gap
    return float(lin) - c1, c1


def _mpq(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def solve(f: TargetFunction, eps: float, params: SigmaParams | None = None,
          bit_budget: int = DEFAULT_BIT_BUDGET, *, check_lipschitz: bool = True) -> NeuronParams:
    """Run the full construction for ``f`` at tolerance ``eps``."""
    params = params or SigmaParams()
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if check_lipschitz:
        f.spot_check()
    g, L1 = to_unit(f)
    n = sikkema_n(L1, eps)
    eps_q = as_fraction(eps)
    # eps/8 for snapping float samples, 3 eps/8 for coefficient rounding
    B = bernstein(g, n, snap=eps_q / (8 * (n + 1)))
    p = round_coefficients(B, 3 * eps_q / 4)
    placement = index_of_polynomial(p, bit_budget)
    piece = piece_coefficients(placement, params)
    c0, c1 = network_coefficients(piece)
    alpha = params.alpha
    w = alpha / (f.b - f.a)
    if placement.is_numeric:
        theta = alpha * f.a / (f.b - f.a) + (1 - 2 * placement.numeric_index) * alpha
    else:
        theta = SymbolicTheta(alpha, f.a, f.b, placement)
    return NeuronParams(c0=c0, c1=c1, w=w, theta=theta, placement=placement, epsilon=eps,
                        a=f.a, b=f.b, sigma_params=params, bernstein_degree=n, piece=piece)
