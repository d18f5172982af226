from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unisigma.expr import ExpressionError, PiecewiseLinear, load_samples, parse_expression

F = Fraction
CORPUS = ["x", "2*x - 1", "abs(x - 3)", "sin(x) / 2", "abs(x - 0.5)", "-x + 1.25",
          "max(min(x, 1), 0)", "sqrt(x) * exp(-x)", "cos(2 * x) - (x - 1) / 3", "-(-x)"]


@pytest.mark.parametrize("text", CORPUS)
def test_parse_print_fixpoint(text):
    once = str(parse_expression(text))
    assert str(parse_expression(once)) == once


def test_exact_evaluation():
    e = parse_expression("abs(x - 0.5) * 3 + 1/3")
    assert e(F(1, 10)) == F(6, 5) + F(1, 3)
    assert parse_expression("min(x, 0.1)")(F(1)) == F(1, 10)
    assert isinstance(parse_expression("2*x - 1")(F(1, 4)), Fraction)


def test_float_evaluation():
    assert parse_expression("sin(x)/2")(1.0) == pytest.approx(math.sin(1) / 2)
    assert parse_expression("sin(x)/2")(F(1)) == pytest.approx(math.sin(1) / 2)


@pytest.mark.parametrize("text, column", [("abs(y-0.5)", 5), ("x ** 2", 1), ("foo(x)", 1),
                                          ("x.real", 1), ("'a'", 1), ("max(x)", 1),
                                          ("x +", None), ("lambda: 1", 1), ("x if x else 1", 1)])
def test_rejections(text, column):
    with pytest.raises(ExpressionError) as info:
        parse_expression(text)
    if column is not None:
        assert info.value.column == column
        assert f"column {column}" in str(info.value)


def test_division_by_zero():
    with pytest.raises(ValueError):
        parse_expression("1/x")(F(0))


@given(st.integers(-100, 100), st.integers(1, 50))
def test_affine_expression_exact(p, q):
    x = F(p, q)
    assert parse_expression("3*x/7 - 2")(x) == 3 * x / 7 - 2


def test_piecewise_linear(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("x,fx\n0,0\n0.5,1\n1,0\n")
    pl = load_samples(path)
    assert pl.domain == (0, 1)
    assert pl(F(1, 4)) == F(1, 2)
    assert pl(0.75) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        pl(2)
    noheader = tmp_path / "n.csv"
    noheader.write_text("0,1\n2,3\n")
    assert load_samples(noheader)(F(1)) == 2


@pytest.mark.parametrize("body", ["0,0\n0,1\n", "0,0\n", "0,0\n1,a\n", "0,0,1\n1,1,1\n"])
def test_bad_samples(tmp_path, body):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ValueError):
        load_samples(path)


def test_piecewise_requires_increasing():
    with pytest.raises(ValueError):
        PiecewiseLinear((F(1), F(0)), (F(0), F(1)))
