"""Evaluating ``c0 + c1 sigma(w x - theta)`` and measuring its sup error."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from . import _kernels
from .polynomial import bernstein_coefficients
from .sigma import SigmaFunction
from .solver import NeuronParams, TargetFunction, network_coefficients

NUMERIC, VIRTUAL = "numeric", "virtual"


@dataclass(frozen=True)
class ErrorReport:
    sup_error: float
    argmax: float
    grid_size: int
    path: str
    slack: float  # bound on the error between grid points

    @property
    def certified_bound(self) -> float:
        return self.sup_error + self.slack


def _drift(value, reference) -> float:
    # parameters read back from text differ from the recomputed ones by rounding
    diff = value - reference
    if abs(diff) <= 1e-12 * max(1, abs(reference)):
        return 0.0
    return diff


class Network:
    """A solved one-neuron network bound to its activation.

    ``numeric`` evaluates ``c0 + c1 sigma(w x - theta)`` literally and needs
    a materialized index.  ``virtual`` uses ``c0 + c1 (a_m + b_m u_m) = u_m``
    on ``[a, b]``, so it never touches ``theta``; any difference between the
    stored ``c0, c1`` and the ones implied by the piece is added back.
    """

    def __init__(self, params: NeuronParams, sigma: SigmaFunction | None = None):
        self.params = params
        self.sigma = sigma or SigmaFunction(params.sigma_params)

    @property
    def default_path(self) -> str:
        return VIRTUAL if self.params.is_symbolic else NUMERIC

    @cached_property
    def _bernstein(self):
        p = self.params.polynomial
        degree = max(p.degree, 1)
        b = bernstein_coefficients(p, degree)
        return b, _kernels.log_binomials(degree)

    @cached_property
    def _corrections(self):
        piece = self.params.piece
        c0_ref, c1_ref = network_coefficients(piece)
        return _drift(self.params.c0, c0_ref), _drift(self.params.c1, c1_ref)

    def lipschitz_bound(self) -> float:
        """Bound on the slope of ``u_m`` mapped back to ``[a, b]``."""
        b, _ = self._bernstein
        if b.size < 2:
            return 0.0
        span = float(self.params.b - self.params.a)
        return (b.size - 1) * float(np.max(np.abs(np.diff(b)))) / span

    def __call__(self, x, path: str | None = None):
        scalar = np.ndim(x) == 0
        out = self.evaluate_many(np.atleast_1d(np.asarray(x, dtype=np.float64)), path)
        return float(out[0]) if scalar else out

    def evaluate_many(self, x, path: str | None = None) -> np.ndarray:
        path = path or self.default_path
        x = np.asarray(x, dtype=np.float64)
        p = self.params
        if path == NUMERIC:
            if p.is_symbolic:
                raise ValueError("numeric path needs a materialized index; use the virtual path")
            # w x - theta = alpha (shift + y) with the integer part of theta/alpha kept exact
            q = p.theta / p.sigma_params.alpha
            whole = q.numerator // q.denominator
            y = float(p.w / p.sigma_params.alpha) * x - float(q - whole)
            return float(p.c0) + float(p.c1) * self.sigma.evaluate_shifted(-whole, y)
        if path != VIRTUAL:
            raise ValueError(f"unknown path {path!r}")
        a, b = float(p.a), float(p.b)
        if x.size and (x.min() < a or x.max() > b):
            raise ValueError(f"virtual path is only defined on [{a}, {b}]")
        unit = np.clip((x - a) / (b - a), 0.0, 1.0)
        coeffs, logc = self._bernstein
        u = _kernels.bernstein_eval(coeffs, unit, logc)
        d0, d1 = self._corrections
        if d0 or d1:
            piece = p.piece
            sig = piece.a + piece.b * u if not piece.is_constant else np.full_like(u, 1.0) * piece.a
            sig = np.array([float(s) for s in np.ravel(sig)]) if isinstance(piece.a, mpmath.mpf) else sig
            u = u + float(d0) + float(d1) * sig
        return u

    def eval_exact(self, x):
        """Numeric path with ``w x - theta`` formed exactly (scalar)."""
        p = self.params
        if p.is_symbolic:
            raise ValueError("numeric path needs a materialized index")
        t = p.w * Fraction(x) - p.theta
        return p.c0 + p.c1 * self.sigma.eval_scalar(t)


def eval_network(params: NeuronParams, x, sigma: SigmaFunction | None = None,
                 path: str | None = None):
    """``c0 + c1 sigma(w x - theta)`` through the numeric or virtual path."""
    return Network(params, sigma)(x, path)


def sup_error(params: NeuronParams, f: TargetFunction, grid: int = 10_000,
              path: str | None = None, sigma: SigmaFunction | None = None) -> ErrorReport:
    """Max ``|f - network|`` on a uniform grid over ``[a, b]`` including endpoints.

    The slack term bounds the error off the grid: the error function is
    ``(L + L_net)``-Lipschitz and every point is within half a spacing of
    the grid.
    """
    if grid < 2:
        raise ValueError(f"grid needs at least 2 points, got {grid}")
    net = Network(params, sigma)
    path = path or net.default_path
    a, b = float(params.a), float(params.b)
    xs = np.linspace(a, b, grid)
    fx = np.array([float(f(float(x))) for x in xs])
    err = np.abs(fx - net.evaluate_many(xs, path))
    i = int(np.argmax(err))
    spacing = (b - a) / (grid - 1)
    slack = (f.lipschitz + net.lipschitz_bound()) * spacing / 2
    return ErrorReport(sup_error=float(err[i]), argmax=float(xs[i]), grid_size=grid,
                       path=path, slack=slack)
