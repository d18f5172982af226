"""Target functions from the command line: expressions in ``x`` and sample files.

Expressions use Python syntax restricted to numeric literals, ``x``,
``+ - * /``, unary minus, parentheses and the calls ``abs sin cos exp sqrt``
(one argument) and ``min max`` (two).  Evaluated at a Fraction, an
expression built only from rational operations returns an exact Fraction.
"""
from __future__ import annotations

import ast
import bisect
import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

FUNCTIONS = {"abs": 1, "sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "min": 2, "max": 2}
_TRANSCENDENTAL = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "sqrt": math.sqrt}
_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div)


class ExpressionError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}")


def _check(node: ast.AST, text: str) -> None:
    col = getattr(node, "col_offset", None)
    col = None if col is None else col + 1
    if isinstance(node, ast.Expression):
        _check(node.body, text)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _BINOPS):
            raise ExpressionError(f"operator {type(node.op).__name__} not allowed", col)
        _check(node.left, text)
        _check(node.right, text)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, ast.USub):
            raise ExpressionError("only unary minus is allowed", col)
        _check(node.operand, text)
    elif isinstance(node, ast.Constant):
        if type(node.value) not in (int, float):
            raise ExpressionError(f"literal {node.value!r} not allowed", col)
    elif isinstance(node, ast.Name):
        if node.id != "x":
            raise ExpressionError(f"unknown identifier {node.id!r}", col)
    elif isinstance(node, ast.Call):
        name = node.func.id if isinstance(node.func, ast.Name) else None
        if name not in FUNCTIONS:
            raise ExpressionError(f"unknown function {name or ast.unparse(node.func)!r}", col)
        if node.keywords or len(node.args) != FUNCTIONS[name]:
            raise ExpressionError(f"{name}() takes {FUNCTIONS[name]} argument(s)", col)
        for arg in node.args:
            _check(arg, text)
    else:
        raise ExpressionError(f"{type(node).__name__} not allowed", col)


class Expression:
    """A parsed target expression; call it with a float or a Fraction."""

    def __init__(self, text: str):
        text = text.strip()
        self.text = text
        try:
            self.tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"syntax error: {exc.msg}", exc.offset) from None
        _check(self.tree, text)
        self._exact = {}
        for node in ast.walk(self.tree):
            if isinstance(node, ast.Constant):
                seg = ast.get_source_segment(text, node) or ""
                try:
                    self._exact[id(node)] = Fraction(seg.replace("_", ""))
                except ValueError:
                    self._exact[id(node)] = Fraction(node.value)

    def __str__(self) -> str:
        return ast.unparse(self.tree)

    def __repr__(self) -> str:
        return f"Expression({str(self)!r})"

    def __call__(self, x):
        try:
            return self._eval(self.tree.body, x, isinstance(x, (int, Fraction)))
        except ZeroDivisionError:
            raise ValueError(f"division by zero evaluating {self} at x={x}") from None

    def _eval(self, node, x, exact):
        if isinstance(node, ast.Constant):
            return self._exact[id(node)] if exact else float(node.value)
        if isinstance(node, ast.Name):
            return x
        if isinstance(node, ast.UnaryOp):
            return -self._eval(node.operand, x, exact)
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left, x, exact)
            right = self._eval(node.right, x, exact)
            op = node.op
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            return left / right
        name = node.func.id
        args = [self._eval(a, x, exact) for a in node.args]
        if name == "abs":
            return abs(args[0])
        if name == "min":
            return min(args)
        if name == "max":
            return max(args)
        return _TRANSCENDENTAL[name](float(args[0]))


def parse_expression(text: str) -> Expression:
    return Expression(text)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolant through ``(x_i, y_i)`` with strictly increasing ``x``."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) < 2 or len(self.xs) != len(self.ys):
            raise ValueError("need at least two (x, fx) samples")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("sample x values must be strictly increasing")

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    def __call__(self, x):
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise ValueError(f"x={x} outside sample range [{lo}, {hi}]")
        if isinstance(x, (int, Fraction)):
            i = min(max(bisect.bisect_right(self.xs, x) - 1, 0), len(self.xs) - 2)
            x0, x1, y0, y1 = self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return float(np.interp(x, [float(v) for v in self.xs], [float(v) for v in self.ys]))


def load_samples(path: str | Path) -> PiecewiseLinear:
    """Read a two-column ``x,fx`` CSV (header row optional)."""
    xs, ys = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {len(row)}")
            try:
                x, y = Fraction(row[0].strip()), Fraction(row[1].strip())
            except ValueError:
                if not xs and lineno == 1:
                    continue
                raise ValueError(f"{path}:{lineno}: not a number") from None
            xs.append(x)
            ys.append(y)
    return PiecewiseLinear(tuple(xs), tuple(ys))
