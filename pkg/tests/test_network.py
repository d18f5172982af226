from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from unisigma.network import NUMERIC, VIRTUAL, ErrorReport, Network, eval_network, sup_error
from unisigma.sigma import SigmaParams
from unisigma.solver import TargetFunction, solve

F = Fraction


@pytest.fixture(scope="module")
def identity():
    f = TargetFunction(lambda x: x, 0, 1, 1)
    return f, solve(f, 0.1)


@pytest.fixture(scope="module")
def kink():
    f = TargetFunction(lambda x: abs(x - F(1, 2)), 0, 1, 1)
    return f, solve(f, 0.1)


def test_identity_point(identity):
    _, params = identity
    assert eval_network(params, 0.25) == pytest.approx(0.25, abs=1e-12)
    assert Network(params).eval_exact(F(1, 4)) == pytest.approx(0.25, abs=1e-12)


def test_constant_instance_returns_d0():
    f = TargetFunction(lambda x: F(3, 7), 0, 1, 1)
    params = solve(f, 0.1)
    assert params.polynomial.is_constant
    d0 = float(params.polynomial.coefficient(0))
    xs = np.linspace(0, 1, 50)
    for path in (NUMERIC, VIRTUAL):
        assert np.allclose(eval_network(params, xs, path=path), d0, atol=1e-14)
    report = sup_error(params, f, 1000)
    assert report.sup_error <= 0.1 / 2


@pytest.mark.parametrize("expr, a, b, L", [("x", 0, 1, 1), ("2*x - 1", 0, 1, 2), ("x", 2, 5, 1),
                                           ("3 - x/2", -1, 1, F(1, 2))])
def test_dual_path_agreement(expr, a, b, L):
    fn = eval("lambda x: " + expr)
    f = TargetFunction(fn, a, b, L)
    params = solve(f, 0.1)
    assert not params.is_symbolic
    rng = np.random.default_rng(5)
    xs = rng.uniform(float(a), float(b), 100)
    num = eval_network(params, xs, path=NUMERIC)
    vir = eval_network(params, xs, path=VIRTUAL)
    assert np.all(np.abs(num - vir) <= 1e-9 * np.maximum(1, np.abs(vir)))


def test_virtual_path_domain(identity):
    _, params = identity
    with pytest.raises(ValueError):
        eval_network(params, 1.5, path=VIRTUAL)
    assert eval_network(params, 1.5, path=NUMERIC) > 0
    with pytest.raises(ValueError):
        eval_network(params, 0.5, path="other")


def test_symbolic_needs_virtual_path(kink):
    _, params = kink
    net = Network(params)
    assert net.default_path == VIRTUAL
    with pytest.raises(ValueError):
        net(0.3, NUMERIC)
    with pytest.raises(ValueError):
        net.eval_exact(0.3)


def test_sup_error_identity(identity):
    f, params = identity
    report = sup_error(params, f, 10_000)
    assert report.sup_error <= 1e-9
    assert report.grid_size == 10_000 and report.path == NUMERIC
    assert 0 <= report.argmax <= 1


def test_sup_error_kink(kink):
    f, params = kink
    report = sup_error(params, f, 10_000)
    assert report.path == VIRTUAL
    assert report.sup_error < 0.1
    assert report.certified_bound < 0.1
    assert report.argmax in np.linspace(0, 1, 10_000)


def test_certified_slack_covers_off_grid_points(kink):
    f, params = kink
    coarse = sup_error(params, f, 200)
    fine = sup_error(params, f, 20_000)
    assert fine.sup_error <= coarse.certified_bound


def test_sup_error_rejects_tiny_grid(identity):
    f, params = identity
    with pytest.raises(ValueError):
        sup_error(params, f, 1)


def test_tampered_constant_breaks_guarantee(identity):
    f, params = identity
    bad = dataclasses.replace(params, c0=params.c0 + 1.0)
    for path in (NUMERIC, VIRTUAL):
        assert sup_error(bad, f, 1000, path=path).sup_error == pytest.approx(1.0, abs=1e-9)


def test_error_report_fields():
    r = ErrorReport(sup_error=0.01, argmax=0.5, grid_size=10, path=NUMERIC, slack=0.002)
    assert r.certified_bound == pytest.approx(0.012)


def test_nonunit_alpha_identity():
    f = TargetFunction(lambda x: x, 0, 1, 1)
    params = solve(f, 0.1, SigmaParams(F(5, 2), F(1, 3)))
    report = sup_error(params, f, 2000)
    assert report.sup_error <= 1e-9
    assert math.isclose(float(params.w), 2.5)
