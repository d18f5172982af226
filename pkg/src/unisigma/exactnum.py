"""Exact rationals and canonical continued fractions.

Rationals are plain :class:`fractions.Fraction` values, which already keep
arbitrary-precision numerators and denominators in lowest terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence

ExactRational = Fraction


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, floats or decimal strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(float(x))


@dataclass(frozen=True)
class ContinuedFraction:
    """Finite simple continued fraction ``[n0; n1, ..., nk]``."""

    terms: tuple[int, ...]

    def __post_init__(self):
        terms = tuple(int(t) for t in self.terms)
        if not terms:
            raise ValueError("continued fraction needs at least one term")
        if terms[0] < 0 or any(t < 1 for t in terms[1:]):
            raise ValueError(f"invalid continued fraction terms {terms}")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[int]:
        return iter(self.terms)

    def __str__(self) -> str:
        head, *tail = self.terms
        if not tail:
            return f"[{head}]"
        return f"[{head}; {', '.join(map(str, tail))}]"

    @property
    def term_sum(self) -> int:
        return sum(self.terms)

    @property
    def is_canonical(self) -> bool:
        return len(self.terms) == 1 or self.terms[-1] >= 2

    def value(self) -> Fraction:
        return rational_from_cf(self)


def _euclid_terms(num: int, den: int) -> list[int]:
    terms = []
    while den:
        q, r = divmod(num, den)
        terms.append(q)
        num, den = den, r
    return terms


def cf_from_rational(q) -> ContinuedFraction:
    """Canonical continued fraction of a positive rational (last term >= 2)."""
    q = as_fraction(q)
    if q <= 0:
        raise ValueError(f"continued fraction needs a positive rational, got {q}")
    return ContinuedFraction(tuple(_euclid_terms(q.numerator, q.denominator)))


def rational_from_cf(cf: ContinuedFraction | Sequence[int]) -> Fraction:
    """Exact value via the convergent recurrence."""
    terms = cf.terms if isinstance(cf, ContinuedFraction) else tuple(cf)
    p_prev, p = 1, terms[0]
    q_prev, q = 0, 1
    for t in terms[1:]:
        p_prev, p = p, t * p + p_prev
        q_prev, q = q, t * q + q_prev
    return Fraction(p, q)


def cf_even(cf: ContinuedFraction) -> ContinuedFraction:
    """Rewrite ``[..., f_k]`` as ``[..., f_k - 1, 1]`` when ``k`` is odd.

    The result has an odd number of terms (last index ``k`` even), which is
    the shape the binary-run encoding of Calkin-Wilf positions expects.
    """
    terms = cf.terms
    if (len(terms) - 1) % 2 == 0:
        return cf
    return ContinuedFraction(terms[:-1] + (terms[-1] - 1, 1))


def cf_term_sum(q) -> int:
    """Sum of the canonical continued-fraction terms of ``|q|`` (0 for zero)."""
    q = abs(as_fraction(q))
    if q == 0:
        return 0
    return sum(_euclid_terms(q.numerator, q.denominator))


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _simplest_positive(lo: Fraction, hi: Fraction) -> Fraction:
    # Stern-Brocot descent, a whole continued-fraction run per iteration
    terms: list[int] = []
    while True:
        c = _ceil(lo)
        if c <= hi:
            terms.append(c)
            break
        n = lo.numerator // lo.denominator
        terms.append(n)
        lo, hi = 1 / (hi - n), 1 / (lo - n)
    return rational_from_cf(terms)


def simplest_rational_in(lo, hi) -> Fraction:
    """Rational in ``[lo, hi]`` with the smallest continued-fraction term sum.

    For a positive interval this is the first Stern-Brocot node inside it,
    which is also the member with the smallest denominator and numerator.
    Intervals containing zero give 0; negative intervals are mirrored.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo == hi:
        return lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_positive(-hi, -lo)
    return _simplest_positive(lo, hi)
