"""Univariate polynomials with exact rational coefficients."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .exactnum import as_fraction


class MalformedPolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class RationalPolynomial:
    """``d0 + d1 t + ... + dk t^k``; the empty tuple is the zero polynomial."""

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coefficients)
        if coeffs and coeffs[-1] == 0:
            raise MalformedPolynomialError(
                f"leading coefficient is zero in {coeffs!r}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def trimmed(cls, coefficients: Iterable) -> RationalPolynomial:
        coeffs = [as_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_constant(self) -> bool:
        return len(self.coefficients) <= 1

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    def __call__(self, t):
        """Horner evaluation; exact for int/Fraction arguments."""
        if isinstance(t, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coefficients):
                acc = acc * t + c
            return acc
        acc = 0.0
        for c in reversed(self.float_coefficients()):
            acc = acc * t + c
        return acc

    def float_coefficients(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients], dtype=np.float64)

    def derivative_bound(self, radius) -> Fraction:
        """``sum i |d_i| radius^(i-1)``, a bound for ``|p'|`` on ``|t| <= radius``."""
        radius = as_fraction(radius)
        return sum((i * abs(c) * radius ** (i - 1)
                    for i, c in enumerate(self.coefficients) if i), Fraction(0))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    @classmethod
    def parse(cls, text: str) -> RationalPolynomial:
        """Inverse of ``str``: accepts e.g. ``1/3 + 2*t^2`` or ``-t``."""
        src = text.replace(" ", "")
        if src in ("", "0"):
            return cls()
        coeffs: dict[int, Fraction] = {}
        pos = 0
        term_re = re.compile(
            r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*(t)(?:\^(\d+))?)?|(t)(?:\^(\d+))?)")
        while pos < len(src):
            mt = term_re.match(src, pos)
            if not mt or mt.end() == pos or (pos and not mt.group(1)):
                raise ValueError(f"cannot parse polynomial at column {pos + 1}: {text!r}")
            sign, num, t1, e1, t2, e2 = mt.groups()
            if num is not None:
                try:
                    coef = Fraction(num)
                except ZeroDivisionError:
                    raise ValueError(f"zero denominator at column {pos + 1}: {text!r}") from None
                power = (int(e1) if e1 else 1) if t1 else 0
            else:
                coef = Fraction(1)
                power = int(e2) if e2 else 1
            if sign == "-":
                coef = -coef
            coeffs[power] = coeffs.get(power, Fraction(0)) + coef
            pos = mt.end()
        top = max(coeffs)
        return cls.trimmed(coeffs.get(i, 0) for i in range(top + 1))


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


def bernstein_coefficients(p: RationalPolynomial | Sequence, degree: int | None = None) -> np.ndarray:
    """Coefficients of ``p`` in the degree-``degree`` Bernstein basis, as floats.

    The conversion is exact (integer arithmetic), only the final values are
    rounded, so evaluating the Bernstein form stays well conditioned on
    [0, 1] even when the monomial coefficients cancel catastrophically.
    Uses ``p(s/(1+s)) (1+s)^N = sum_k C(N,k) b_k s^k``.
    """
    if not isinstance(p, RationalPolynomial):
        p = RationalPolynomial.trimmed(p)
    n = max(p.degree, 0) if degree is None else degree
    if n < p.degree:
        raise ValueError(f"Bernstein degree {n} below polynomial degree {p.degree}")
    if p.is_zero:
        return np.zeros(n + 1)
    den = _lcm(c.denominator for c in p.coefficients)
    nums = [c.numerator * (den // c.denominator) for c in p.coefficients]
    acc = np.zeros(n + 1, dtype=object)
    acc[:] = 0
    acc[0] = nums[0]
    for j in range(1, n + 1):
        acc[1:j + 1] = acc[1:j + 1] + acc[0:j]
        if j < len(nums):
            acc[j] += nums[j]
    return np.array([int(acc[k]) / (math.comb(n, k) * den) for k in range(n + 1)],
                    dtype=np.float64)
