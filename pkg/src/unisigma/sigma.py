"""The universal sigmoidal activation.

Layout on the real line, for ``m = 1, 2, ...``:

* ``t < alpha``: smooth increasing tail rising to ``(1 + h(3 alpha)) / 2``;
* ``[(2m-1) alpha, 2m alpha]``: affine image ``a_m + b_m u_m`` of the m-th
  rational polynomial, squeezed into ``[(1+2M)/3, (2+M)/3]``;
* ``[2m alpha, (2m+1) alpha]``: smooth transitions that flatten to the
  level ``K_m`` at the midpoint.

Enumeration data and the ``A1/A2`` bounds are exact rationals; only the
logarithm in ``h`` and the exponentials of the bump are floating point
(binary64, or mpmath with ``precision="extended"``).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import _kernels
from .enumeration import Placement, placement_for_index, polynomial_at
from .exactnum import as_fraction
from .polynomial import RationalPolynomial

EXTENDED_PREC = 128  # bits of significand in extended mode

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SigmaParams:
    """Interval scale ``alpha`` and monotonicity slack ``lambda_`` (both > 0)."""

    alpha: Fraction = Fraction(1)
    lambda_: Fraction = Fraction(1, 2)

    def __post_init__(self):
        alpha, lam = as_fraction(self.alpha), as_fraction(self.lambda_)
        if alpha <= 0 or lam <= 0:
            raise ValueError(f"alpha and lambda must be positive, got {alpha}, {lam}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lambda_", lam)

    @property
    def slack(self) -> Fraction:
        """``min(1/2, lambda)``, the distance ``1 - h(alpha)``."""
        return min(_HALF, self.lambda_)


def _mp(x):
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _to_float(x: Fraction) -> float:
    return x.numerator / x.denominator


def _log_pos(x, extended: bool):
    if extended:
        return mpmath.log(_mp(x))
    if isinstance(x, Fraction):
        if max(x.numerator.bit_length(), x.denominator.bit_length()) < 1000:
            return math.log(_to_float(x))
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def _exact_or_float(t):
    if isinstance(t, (int, Fraction)):
        return Fraction(t)
    if isinstance(t, str):
        return as_fraction(t)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"sigma needs a finite argument, got {t}")
    return Fraction(t)


def _h_gap(log_arg, params: SigmaParams, extended: bool):
    """``1 - h`` given ``log(t - alpha + 1)``."""
    slack = _mp(params.slack) if extended else _to_float(params.slack)
    return slack / (1 + log_arg)


def h(t, params: SigmaParams, *, extended: bool = False):
    """``1 - min(1/2, lambda) / (1 + log(t - alpha + 1))`` for ``t >= alpha``."""
    if isinstance(t, mpmath.mpf):
        if t < _mp(params.alpha):
            raise ValueError(f"h is defined for t >= alpha, got {t}")
        return 1 - _h_gap(mpmath.log(t - _mp(params.alpha) + 1), params, True)
    x = _exact_or_float(t)
    if x < params.alpha:
        raise ValueError(f"h is defined for t >= alpha={params.alpha}, got {t}")
    gap = _h_gap(_log_pos(x - params.alpha + 1, extended), params, extended)
    return 1 - gap


def bump(t):
    """``exp(-1/t)`` for ``t > 0``, else 0."""
    if t <= 0:
        return 0.0
    return math.exp(-1.0 / t)


def _transition_exact(a: Fraction, b: Fraction, t: Fraction, extended: bool):
    if t <= a:
        return 1
    if t >= b:
        return 0
    # bump(b-t) / (bump(b-t) + bump(t-a)) rewritten to avoid 0/0 underflow
    x = 1 / (b - t) - 1 / (t - a)
    if extended:
        return 1 / (1 + mpmath.exp(_mp(x)))
    xf = _to_float(x)
    if xf > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(xf))


def transition(a, b, t, *, extended: bool = False):
    """Smooth step equal to 1 for ``t <= a`` and 0 for ``t >= b``."""
    a, b, t = _exact_or_float(a), _exact_or_float(b), _exact_or_float(t)
    if a >= b:
        raise ValueError(f"transition needs a < b, got a={a}, b={b}")
    return float(_transition_exact(a, b, t, extended)) if not extended else \
        _transition_exact(a, b, t, True)


@dataclass(frozen=True)
class PieceCoefficients:
    """Coefficients of the polynomial piece on ``[(2m-1) alpha, 2m alpha]``.

    For a constant ``u_m`` the piece value ``(1 + M)/2`` is stored in ``a``
    and ``b`` is 0, so ``a + b u_m(s)`` is the piece in every case.
    """

    placement: Placement
    polynomial: RationalPolynomial
    A1: Fraction
    A2: Fraction
    gap: object  # 1 - M
    a: object
    b: object
    is_constant: bool
    delta: Fraction  # width of the transition after this piece
    delta_bar: Fraction  # width of the transition before this piece

    @property
    def M(self):
        return 1 - self.gap

    def at(self, s):
        """``a + b u_m(s)`` at a local coordinate ``s``."""
        if self.is_constant:
            return self.a
        u = self.polynomial(s)
        if isinstance(self.a, mpmath.mpf):
            return self.a + self.b * _mp(u)
        return self.a + self.b * (_to_float(u) if isinstance(u, Fraction) else u)


def polynomial_bounds(u: RationalPolynomial) -> tuple[Fraction, Fraction]:
    """``(A1, A2)`` with ``A1 <= u(t) <= A2`` on [0, 1]."""
    d0 = u.coefficient(0)
    neg = sum((c for c in u.coefficients[1:] if c < 0), Fraction(0))
    pos = sum((c for c in u.coefficients[1:] if c > 0), Fraction(0))
    return d0 + neg, d0 + pos


def _delta_ratio(u: RationalPolynomial, radius: Fraction) -> Fraction:
    # eps / (b_m C) with eps = (1-M)/6 reduces to (A2 - A1) / (2C); M cancels
    if u.is_constant:
        return _HALF
    spread = sum((abs(c) for c in u.coefficients[1:]), Fraction(0))
    return min(spread / (2 * u.derivative_bound(radius)), _HALF)


def _log_piece_arg(placement: Placement, params: SigmaParams, extended: bool):
    """``log(2 m alpha + 1)``, the argument of ``h((2m+1) alpha)``."""
    if placement.numeric_index is not None:
        return _log_pos(2 * placement.numeric_index * params.alpha + 1, extended)
    with mpmath.workprec(max(mpmath.mp.prec, 64)):
        log2m = placement.log2_index()
        log_2malpha = log2m * mpmath.ln2 + mpmath.log(2 * _mp(params.alpha))
        if log2m > mpmath.mp.prec + 64:
            return log_2malpha  # the +1 is below working precision
        return log_2malpha + mpmath.log1p(mpmath.exp(-log_2malpha))


def piece_coefficients(m: int | Placement, params: SigmaParams, *,
                       extended: bool = False) -> PieceCoefficients:
    """``A1, A2, M, a_m, b_m`` and transition widths for the m-th piece.

    Symbolic placements (index too large to materialize) are handled with
    mpmath numbers, whose exponent range covers ``h`` at any index.
    """
    placement = m if isinstance(m, Placement) else placement_for_index(m)
    u = polynomial_at(placement)
    A1, A2 = polynomial_bounds(u)
    mp_mode = extended or placement.numeric_index is None
    gap = _h_gap(_log_piece_arg(placement, params, mp_mode), params, mp_mode)
    if u.is_constant:
        a, b = 1 - gap / 2, gap * 0
    else:
        spread = A2 - A1
        ratio = (2 * A2 - A1) / (3 * spread)
        inv = 1 / (3 * spread)
        if mp_mode:
            a, b = 1 - gap * _mp(ratio), gap * _mp(inv)
        else:
            a, b = 1 - gap * _to_float(ratio), gap * _to_float(inv)
    alpha = params.alpha
    return PieceCoefficients(
        placement=placement, polynomial=u, A1=A1, A2=A2, gap=gap, a=a, b=b,
        is_constant=u.is_constant,
        delta=alpha * _delta_ratio(u, Fraction(3, 2)),
        delta_bar=alpha * _delta_ratio(u, _HALF),
    )


def delta(m: int | Placement, params: SigmaParams) -> Fraction:
    """Width of the first-half transition after piece ``m`` (at most alpha/2)."""
    return piece_coefficients(m, params).delta


def delta_bar(m: int | Placement, params: SigmaParams) -> Fraction:
    """Width of the second-half transition before piece ``m + 1``."""
    nxt = m.numeric_index if isinstance(m, Placement) else m
    return piece_coefficients(nxt + 1, params).delta_bar


class SigmaFunction:
    """Evaluator of the activation for fixed ``(alpha, lambda)``.

    Scalar calls locate the piece exactly (floats are converted to their
    exact binary value); array calls go through the float grid kernel.
    Piece coefficients are memoized under a lock.
    """

    def __init__(self, params: SigmaParams | None = None, precision: str = "double",
                 bits: int = EXTENDED_PREC):
        if precision not in ("double", "extended"):
            raise ValueError(f"precision must be 'double' or 'extended', got {precision!r}")
        if bits < 100:
            raise ValueError(f"extended mode needs at least 100 bits, got {bits}")
        self.params = params or SigmaParams()
        self.precision = precision
        self.extended = precision == "extended"
        self.bits = bits
        self._pieces: dict[int, PieceCoefficients] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        p = self.params
        return f"SigmaFunction(alpha={p.alpha}, lambda={p.lambda_}, precision={self.precision!r})"

    def piece(self, m: int) -> PieceCoefficients:
        pc = self._pieces.get(m)
        if pc is None:
            if self.extended:
                with mpmath.workprec(self.bits):
                    pc = piece_coefficients(m, self.params, extended=True)
            else:
                pc = piece_coefficients(m, self.params)
            with self._lock:
                pc = self._pieces.setdefault(m, pc)
        return pc

    def h(self, t):
        if self.extended:
            with mpmath.workprec(self.bits):
                return h(t, self.params, extended=True)
        return h(t, self.params)

    @property
    def tail_level(self):
        """``sigma(alpha) = (1 + h(3 alpha)) / 2``."""
        return self.piece(1).a

    def level(self, m: int):
        """``K_m``, the flat value at ``2m alpha + alpha/2``."""
        return (self.piece(m).at(1) + self.piece(m + 1).at(0)) / 2

    def __call__(self, t):
        if isinstance(t, (np.ndarray, list, tuple)):
            return self.evaluate_many(t)
        return self.eval_scalar(t)

    def eval_scalar(self, t):
        if self.extended:
            with mpmath.workprec(self.bits):
                return self._eval(_exact_or_float(t))
        return self._eval(_exact_or_float(t))

    def _eval(self, t: Fraction):
        alpha, ext = self.params.alpha, self.extended
        if t < alpha:
            x = 1 / (alpha - t)
            one_minus_bump = -mpmath.expm1(-_mp(x)) if ext else -math.expm1(-_to_float(x))
            return one_minus_bump * self.tail_level
        r = t / alpha
        k = r.numerator // r.denominator
        if k % 2 == 1:
            m = (k + 1) // 2
            return self.piece(m).at(r - (2 * m - 1))
        m = k // 2
        if r == k:
            return self.piece(m).at(Fraction(1))
        kv = self.level(m)
        if r - 2 * m <= _HALF:
            pc = self.piece(m)
            left = 2 * m * alpha
            beta = _transition_exact(left, left + pc.delta, t, ext)
            return kv - beta * (kv - pc.at(r - (2 * m - 1)))
        nxt = self.piece(m + 1)
        right = (2 * m + 1) * alpha
        beta = _transition_exact(right - nxt.delta_bar, right, t, ext)
        return kv - (1 - beta) * (kv - nxt.at(r - (2 * m + 1)))

    def piece_table(self, m_max: int, m_min: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Float table for the grid kernel: row ``j`` is piece ``m_min + j``, up to ``m_max + 1``."""
        pieces = [self.piece(m) for m in range(m_min, m_max + 2)]
        width = max(pc.polynomial.degree for pc in pieces) + 1
        table = np.zeros((len(pieces), 5))
        coeffs = np.zeros((len(pieces), max(width, 1)))
        for j, pc in enumerate(pieces):
            table[j, _kernels.A] = float(pc.a)
            table[j, _kernels.B] = float(pc.b)
            table[j, _kernels.DELTA_R] = _to_float(pc.delta / self.params.alpha)
            table[j, _kernels.DELTA_L] = _to_float(pc.delta_bar / self.params.alpha)
            if j < len(pieces) - 1:
                table[j, _kernels.K] = float(self.level(m_min + j))
            fc = pc.polynomial.float_coefficients()
            coeffs[j, :fc.size] = fc
        return table, coeffs

    def evaluate_many(self, t) -> np.ndarray:
        """Vectorized binary64 evaluation over an array of arguments."""
        t = np.asarray(t, dtype=np.float64)
        if not np.all(np.isfinite(t)):
            raise ValueError("sigma needs finite arguments")
        return self.evaluate_shifted(0, t / _to_float(self.params.alpha))

    def evaluate_shifted(self, shift: int, y) -> np.ndarray:
        """``sigma(alpha (shift + y))`` for an integer ``shift`` of any size.

        Keeping the integer part out of the float lets networks with huge
        ``theta`` be evaluated without losing the position inside a piece.
        """
        y = np.asarray(y, dtype=np.float64)
        out = np.empty_like(y)
        if y.size == 0:
            return out
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) >= 2.0 ** 52:
            raise ValueError("sigma grid evaluation needs finite offsets below 2^52")
        alpha = _to_float(self.params.alpha)
        fl = np.floor(y)
        if shift + int(fl.max()) < 1:
            tail = np.ones(y.shape, dtype=bool)
        elif shift + int(fl.min()) >= 1:
            tail = np.zeros(y.shape, dtype=bool)
        else:
            tail = fl < 1 - shift
        if tail.any():
            # only reachable with a small shift, so this sum is exact enough
            gap = alpha * (1.0 - (float(shift) + y[tail]))
            out[tail] = -np.expm1(-1.0 / gap) * float(self.tail_level)
        right = ~tail
        if right.any():
            fr = fl[right]
            k_lo, k_hi = shift + int(fr.min()), shift + int(fr.max())
            base = max(k_lo // 2, 1)
            table, coeffs = self.piece_table(k_hi // 2, base)
            kr = (fr + float(shift - 2 * base)).astype(np.int64)
            out[right] = _kernels.sigma_grid(kr, y[right] - fr, alpha, table, coeffs)
        return out


@lru_cache(maxsize=32)
def _shared(params: SigmaParams, precision: str) -> SigmaFunction:
    return SigmaFunction(params, precision)


def sigma_eval(t, params: SigmaParams | None = None, precision: str = "double"):
    """Evaluate the activation at ``t`` (scalar) or over an array."""
    return _shared(params or SigmaParams(), precision)(t)
