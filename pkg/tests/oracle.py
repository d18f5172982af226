"""Slow reference implementations built directly from the definitions.

Shares no code with the package: the enumeration uses Stern's
recurrence, continued fractions use Euclid, and sigma is assembled from the
textbook formulas in mpmath.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath


@lru_cache(maxsize=None)
def stern(n: int) -> int:
    if n == 1:
        return 1
    if n % 2 == 0:
        return stern(n // 2)
    return stern(n // 2) + stern(n // 2 + 1)


def q(n: int) -> Fraction:
    return Fraction(stern(n), stern(n + 1))


def r(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    return q(n // 2) if n % 2 == 0 else -q((n + 1) // 2)


def euclid(x: Fraction) -> list[int]:
    a, b, out = x.numerator, x.denominator, []
    while b:
        out.append(a // b)
        a, b = b, a % b
    return out


def u(m: int) -> list[Fraction]:
    """Coefficients of the m-th polynomial, lowest degree first."""
    if m == 1:
        return []
    n0, *rest = euclid(q(m - 1))
    coeffs = [r(n0)] + [r(n - 1) for n in rest]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def mpq(x) -> mpmath.mpf:
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def poly(coeffs, t):
    return sum((mpq(c) * t ** i for i, c in enumerate(coeffs)), mpmath.mpf(0))


class Sigma:
    """sigma assembled piece by piece from the defining formulas."""

    def __init__(self, alpha=1, lam=Fraction(1, 2), prec: int = 200):
        self.alpha, self.lam, self.prec = Fraction(alpha), Fraction(lam), prec

    def h(self, t):
        lam = mpq(min(Fraction(1, 2), self.lam))
        return 1 - lam / (1 + mpmath.log(t - mpq(self.alpha) + 1))

    def piece(self, m):
        """(coeffs, M, a, b, constant) for piece m."""
        d = u(m)
        M = self.h((2 * m + 1) * mpq(self.alpha))
        if len(d) <= 1:
            return d, M, (1 + M) / 2, mpmath.mpf(0), True
        A1 = d[0] + sum((c - abs(c)) / 2 for c in d[1:])
        A2 = d[0] + sum((c + abs(c)) / 2 for c in d[1:])
        a = ((1 + 2 * M) * mpq(A2) - (2 + M) * mpq(A1)) / (3 * mpq(A2 - A1))
        b = (1 - M) / (3 * mpq(A2 - A1))
        return d, M, a, b, False

    def piece_value(self, m, s):
        d, _, a, b, const = self.piece(m)
        return a if const else a + b * poly(d, s)

    def width(self, m, radius):
        d, M, _, b, const = self.piece(m)
        if const:
            return mpq(self.alpha) / 2
        C = sum(i * abs(mpq(c)) * mpq(radius) ** (i - 1) for i, c in enumerate(d) if i)
        eps = (1 - M) / 6
        return min(eps * mpq(self.alpha) / (b * C), mpq(self.alpha) / 2)

    @staticmethod
    def beta(a, b, t):
        if t <= a:
            return mpmath.mpf(1)
        if t >= b:
            return mpmath.mpf(0)
        left, right = mpmath.exp(-1 / (b - t)), mpmath.exp(-1 / (t - a))
        return left / (left + right)

    def __call__(self, t):
        with mpmath.workprec(self.prec):
            t = mpq(t)
            al = mpq(self.alpha)
            if t < al:
                bump = mpmath.exp(-1 / (al - t))
                return (1 - bump) * (1 + self.h(3 * al)) / 2
            x = t / al
            k = int(mpmath.floor(x))
            if k % 2 == 1 or x == k:
                m = (k + 1) // 2
                return self.piece_value(m, x - 2 * m + 1)
            m = k // 2
            K = (self.piece_value(m, 1) + self.piece_value(m + 1, 0)) / 2
            if x - 2 * m <= mpmath.mpf(1) / 2:
                delta = self.width(m, Fraction(3, 2))
                beta = self.beta(2 * m * al, 2 * m * al + delta, t)
                return K - beta * (K - self.piece_value(m, x - 2 * m + 1))
            dbar = self.width(m + 1, Fraction(1, 2))
            right = (2 * m + 1) * al
            beta = self.beta(right - dbar, right, t)
            return K - (1 - beta) * (K - self.piece_value(m + 1, x - 2 * m - 1))
