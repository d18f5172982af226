"""Calkin-Wilf enumeration of the rationals and of rational polynomials.

``q_n`` runs through every positive rational once, ``r_n`` through every
rational, and ``u_m`` through every polynomial with rational coefficients.
Positions are arbitrary-precision ints; when a polynomial's index would be
too long to write down, a :class:`Placement` carries it symbolically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exactnum import (ContinuedFraction, as_fraction, cf_even, cf_from_rational,
                       cf_term_sum, rational_from_cf)
from .polynomial import MalformedPolynomialError, RationalPolynomial

__all__ = [
    "DEFAULT_BIT_BUDGET", "MalformedPolynomialError", "Placement", "RationalPolynomial",
    "calkin_wilf", "calkin_wilf_stern", "index_of_polynomial", "placement_for_index",
    "polynomial_at", "position_bits", "position_of", "position_of_positive",
    "rational_at", "stern",
]

DEFAULT_BIT_BUDGET = 1_000_000


def _check_positive(n: int, what: str = "n") -> int:
    if n < 1:
        raise ValueError(f"{what} must be a positive integer, got {n}")
    return n


def _stern_pair(n: int) -> tuple[int, int]:
    # (a_k, a_{k+1}) for the prefixes k of n's binary code
    x, y = 1, 1
    for bit in bin(n)[3:]:
        if bit == "0":
            y = x + y
        else:
            x = x + y
    return x, y


def stern(n: int) -> int:
    """Stern's diatomic sequence ``a_n``."""
    return _stern_pair(_check_positive(n))[0]


def calkin_wilf_stern(n: int) -> Fraction:
    """``q_n = a_n / a_{n+1}`` straight from Stern's recurrence."""
    x, y = _stern_pair(_check_positive(n))
    return Fraction(x, y)


def _runs_from_low(n: int) -> list[int]:
    """Run lengths of ``n``'s binary code from the low end: 1s, 0s, 1s, ...

    The first entry (trailing ones) may be 0.
    """
    runs = [len(list(g)) for _, g in itertools.groupby(reversed(bin(n)[2:]))]
    if n & 1 == 0:
        runs.insert(0, 0)
    return runs


def calkin_wilf(n: int) -> Fraction:
    """``q_n`` decoded from the binary runs of ``n`` as a continued fraction."""
    return rational_from_cf(_runs_from_low(_check_positive(n)))


def rational_at(n: int) -> Fraction:
    """``r_0 = 0, r_{2n} = q_n, r_{2n-1} = -q_n``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return Fraction(0)
    if n % 2 == 0:
        return calkin_wilf(n // 2)
    return -calkin_wilf((n + 1) // 2)


def _binary_word(cf: ContinuedFraction) -> str:
    terms = cf_even(cf).terms
    return "".join(("0" if i % 2 else "1") * f for i, f in reversed(list(enumerate(terms))))


def _cf_position(cf: ContinuedFraction) -> int:
    return int(_binary_word(cf), 2)


def position_of_positive(q) -> int:
    """``p_q``: position of a positive rational in the Calkin-Wilf sequence."""
    q = as_fraction(q)
    if q <= 0:
        raise ValueError(f"position_of_positive needs q > 0, got {q}")
    return _cf_position(cf_from_rational(q))


def position_of(r) -> int:
    """``p_r``: position of any rational in ``r_n``."""
    r = as_fraction(r)
    if r == 0:
        return 0
    if r > 0:
        return 2 * position_of_positive(r)
    return 2 * position_of_positive(-r) - 1


def position_bits(r) -> int:
    """Bit length of ``position_of(r)`` without computing the position."""
    r = as_fraction(r)
    if r == 0:
        return 0
    bits = cf_term_sum(r)
    # p_q(1/j) = 2^(j-1), so 2 p_q - 1 loses the extra bit
    if r < 0 and r.numerator == -1:
        return bits
    return bits + 1


def _top_bits(runs_high_first, width: int = 64) -> int:
    """Leading ``width`` bits of the word made of alternating 1/0 runs."""
    top, got, bit = 0, 0, 1
    for run in runs_high_first:
        take = min(run, width - got)
        top = (top << take) | (((1 << take) - 1) if bit else 0)
        got += take
        bit ^= 1
        if got == width:
            break
    return top << (width - got) if got < width else top


def _log2_estimate(coeffs, term_bits) -> mpmath.mpf:
    """``log2`` of the position of ``[n_0; n_1 + 1, ...]`` from the leading bits of each ``n_i``."""
    total, runs = mpmath.mpf(0), []
    for i, c in enumerate(coeffs):
        if term_bits[i] <= 64:
            n_i = position_of(c)
        else:
            # n_i is 2 p_q(|c|) or one less; its top bits are those of p_q
            cf = cf_from_rational(abs(c))
            top = _top_bits(reversed(cf_even(cf).terms))
            n_i = mpmath.ldexp(mpmath.mpf(top), cf.term_sum + 1 - 64)
        run = n_i + (1 if i else 0)
        total += run
        runs.append(run)
    if len(runs) % 2 == 0:  # make the last index even, as the position word requires
        runs[-1:] = [runs[-1] - 1, 1]
    capped = [min(r, 64) if isinstance(r, int) else 64 for r in reversed(runs)]
    return mpmath.log(mpmath.mpf(_top_bits(capped)), 2) + total - 64


@dataclass(frozen=True)
class Placement:
    """Where a polynomial sits in the enumeration ``u_1, u_2, ...``.

    ``cf`` is the continued fraction of ``q_{m-1}`` (None for ``m == 1`` or
    when its terms are themselves too long to hold), ``numeric_index`` is
    ``m`` when its bit length fits the budget.
    """

    polynomial: RationalPolynomial
    cf: ContinuedFraction | None
    numeric_index: int | None
    term_bits: tuple[int, ...] = ()

    @property
    def is_unit(self) -> bool:
        return self.polynomial.is_zero

    @property
    def is_numeric(self) -> bool:
        return self.numeric_index is not None

    @property
    def index_bits(self) -> int | None:
        """Bit length of ``m - 1`` (0 for ``m == 1``), if the CF is known."""
        if self.is_unit:
            return 0
        if self.cf is None:
            return None
        return self.cf.term_sum

    def log2_index(self):
        """``log2(m)`` as an mpmath number; huge indices are estimated from bit lengths."""
        if self.numeric_index is not None:
            return mpmath.log(mpmath.mpf(self.numeric_index), 2)
        if self.cf is not None:
            bits = self.cf.term_sum
            if bits <= 4096:
                return mpmath.log(mpmath.mpf(_cf_position(self.cf) + 1), 2)
            top = _top_bits(reversed(cf_even(self.cf).terms))
            return mpmath.log(mpmath.mpf(top), 2) + (bits - 64)
        # terms of q_{m-1} are the positions n_i (plus one past n_0), some too long to hold
        coeffs = self.polynomial.coefficients
        if max(self.term_bits) <= 4096:
            n0, *rest = (position_of(c) for c in coeffs)
            return Placement(self.polynomial, ContinuedFraction((n0,) + tuple(n + 1 for n in rest)),
                             None, self.term_bits).log2_index()
        return _log2_estimate(coeffs, self.term_bits)

    def run_summary(self) -> str:
        """Compact description of the continued fraction of ``q_{m-1}``."""
        if self.is_unit:
            return "unit"
        if self.cf is not None and len(str(self.cf)) <= 200:
            return f"cf={self.cf} index_bits={self.cf.term_sum}"
        bits = self.term_bits
        return (f"terms={len(bits)} max_term_bits={max(bits)} "
                f"total_term_bits={sum(bits)}")


def placement_for_index(m: int) -> Placement:
    _check_positive(m, "m")
    if m == 1:
        return Placement(RationalPolynomial(), None, 1)
    cf = ContinuedFraction(tuple(_runs_from_low(m - 1)))
    cf = cf_from_rational(rational_from_cf(cf))
    poly = _decode_cf(cf)
    return Placement(poly, cf, m, tuple(position_bits(c) for c in poly.coefficients))


def _decode_cf(cf: ContinuedFraction) -> RationalPolynomial:
    n0, *rest = cf.terms
    return RationalPolynomial((rational_at(n0),) + tuple(rational_at(n - 1) for n in rest))


def polynomial_at(m: int | Placement) -> RationalPolynomial:
    """``u_m``: ``u_1 = 0``, else decoded from the continued fraction of ``q_{m-1}``."""
    if isinstance(m, Placement):
        if m.is_unit or m.cf is None:
            return m.polynomial
        return _decode_cf(m.cf)
    _check_positive(m, "m")
    if m == 1:
        return RationalPolynomial()
    return _decode_cf(cf_from_rational(calkin_wilf(m - 1)))


def index_of_polynomial(p, bit_budget: int = DEFAULT_BIT_BUDGET) -> Placement:
    """Locate ``p`` in the enumeration, materializing ``m`` only within ``bit_budget`` bits."""
    if not isinstance(p, RationalPolynomial):
        p = RationalPolynomial(tuple(p))
    if p.is_zero:
        return Placement(p, None, 1)
    term_bits = tuple(position_bits(c) for c in p.coefficients)
    if max(term_bits) > bit_budget:
        return Placement(p, None, None, term_bits)
    n0, *rest = (position_of(c) for c in p.coefficients)
    cf = ContinuedFraction((n0,) + tuple(n + 1 for n in rest))
    index = _cf_position(cf) + 1 if cf.term_sum <= bit_budget else None
    return Placement(p, cf, index, term_bits)
