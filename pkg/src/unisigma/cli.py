"""Command-line front end.

Subcommands: ``sigma``, ``plot``, ``enum``, ``solve``, ``verify``.  Output is
line oriented (``t,sigma`` CSV or ``key=value``).  Exit codes: 0 success,
1 verification or I/O failure, 2 bad flags, 3 expression/sample parse error.
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import enumeration
from .enumeration import DEFAULT_BIT_BUDGET, index_of_polynomial
from .expr import ExpressionError, load_samples, parse_expression
from .network import sup_error
from .polynomial import RationalPolynomial
from .sigma import SigmaFunction, SigmaParams
from .solver import NeuronParams, TargetFunction, solve

EXIT_OK, EXIT_FAIL, EXIT_FLAGS, EXIT_PARSE = 0, 1, 2, 3


class _ParseFailure(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive(text: str) -> Fraction:
    value = _rational(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _fmt(x) -> str:
    if isinstance(x, mpmath.mpf):
        # exact binary form; decimal exponents of symbolic values are unparseable in practice
        sign, man, exp, _ = x._mpf_
        return f"{'-' if sign else ''}{int(man)}*2^{exp}"
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def _add_sigma_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_positive, default=Fraction(1), help="interval scale (default 1)")
    p.add_argument("--lambda", dest="lam", type=_positive, default=Fraction(1, 2),
                   help="monotonicity slack (default 1/2)")


def _add_target_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="target expression in x, e.g. 'abs(x-0.5)'")
    src.add_argument("--samples", type=Path, help="CSV of x,fx pairs (piecewise linear)")
    p.add_argument("-a", type=_rational, help="left end of the interval")
    p.add_argument("-b", type=_rational, help="right end of the interval")
    p.add_argument("-L", "--lipschitz", type=_positive, required=True, help="Lipschitz constant")
    p.add_argument("--eps", type=_positive, required=True, help="target accuracy")
    p.add_argument("--max-index-bits", type=int, default=DEFAULT_BIT_BUDGET,
                   help="largest index m (in bits) to write out numerically")
    _add_sigma_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unisigma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", help="evaluate the activation")
    _add_sigma_flags(p)
    p.add_argument("-t", action="append", type=_rational, required=True, metavar="T",
                   help="argument (repeatable)")
    p.add_argument("--precision", choices=("double", "extended"), default="double")

    p = sub.add_parser("plot", help="tabulate the activation as t,sigma CSV")
    _add_sigma_flags(p)
    p.add_argument("--from", dest="start", type=_rational, default=Fraction(0))
    p.add_argument("--to", dest="stop", type=_rational, default=Fraction(10))
    p.add_argument("--step", type=_positive, default=Fraction(1, 100))
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--precision", choices=("double", "extended"), default="double")

    p = sub.add_parser("enum", help="print enumeration terms")
    p.add_argument("kind", choices=("stern", "q", "r", "poly"))
    p.add_argument("n", type=int)

    p = sub.add_parser("solve", help="compute c0, c1, w, theta for a target")
    _add_target_flags(p)

    p = sub.add_parser("verify", help="measure the sup error of a solved network")
    _add_target_flags(p)
    p.add_argument("--params", type=Path, help="key=value output of 'solve' (re-solves if omitted)")
    p.add_argument("--grid", type=int, default=10_000)
    return parser


def _sigma_value(sig: SigmaFunction, t: Fraction) -> str:
    value = sig(t)
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 17, strip_zeros=False)
    return f"{value:.17g}"


def _cmd_sigma(args, out) -> int:
    sig = SigmaFunction(SigmaParams(args.alpha, args.lam), args.precision)
    for t in args.t:
        out.write(f"{t},{_sigma_value(sig, t)}\n")
    return EXIT_OK


def _cmd_plot(args, out) -> int:
    sig = SigmaFunction(SigmaParams(args.alpha, args.lam), args.precision)
    count = int((args.stop - args.start) / args.step) + 1
    lines = ["t,sigma\n"]
    for i in range(count):
        t = args.start + i * args.step
        value = sig(t)
        text = mpmath.nstr(value, 17) if isinstance(value, mpmath.mpf) else repr(float(value))
        lines.append(f"{float(t)!r},{text}\n")
    if args.out == "-":
        out.writelines(lines)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="\n") as fh:
            fh.writelines(lines)
    except OSError as exc:
        print(f"unisigma: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_enum(args, out) -> int:
    kind, n = args.kind, args.n
    funcs = {"stern": enumeration.stern, "q": enumeration.calkin_wilf,
             "r": enumeration.rational_at, "poly": enumeration.polynomial_at}
    out.write(f"{funcs[kind](n)}\n")
    return EXIT_OK


def _target(args) -> TargetFunction:
    try:
        if args.expr is not None:
            fn = parse_expression(args.expr)
            a = Fraction(0) if args.a is None else args.a
            b = Fraction(1) if args.b is None else args.b
        else:
            fn = load_samples(args.samples)
            lo, hi = fn.domain
            a = lo if args.a is None else args.a
            b = hi if args.b is None else args.b
    except (ExpressionError, ValueError, OSError) as exc:
        raise _ParseFailure(str(exc)) from None
    return TargetFunction(fn, a, b, float(args.lipschitz))


def _solve_lines(params: NeuronParams, f: TargetFunction, args) -> list[str]:
    pl = params.placement
    lines = {
        "n": params.bernstein_degree,
        "m": pl.numeric_index if pl.is_numeric else "symbolic",
        "numeric_index": str(pl.is_numeric).lower(),
        "placement": pl.run_summary(),
        "c0": _fmt(params.c0),
        "c1": _fmt(params.c1),
        "w": _fmt(params.w),
        "theta": _fmt(params.theta) if pl.is_numeric else "symbolic",
        "alpha": params.sigma_params.alpha,
        "lambda": params.sigma_params.lambda_,
        "a": f.a,
        "b": f.b,
        "eps": _fmt(args.eps),
        "lipschitz": _fmt(args.lipschitz),
        "p": params.polynomial,
    }
    if not pl.is_numeric:
        lines["theta_log2_magnitude"] = mpmath.nstr(params.theta.log2_magnitude(), 17)
    return [f"{k}={v}" for k, v in lines.items()]


def _read_params(path: Path) -> dict[str, str]:
    values = {}
    for line in path.read_text().splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_BINARY = re.compile(r"^(-?\d+)\*2\^(-?\d+)$")


def _number(text: str):
    mt = _BINARY.match(text)
    if mt:
        return mpmath.mpf((int(mt.group(1)), int(mt.group(2))))
    return Fraction(text)


def _params_from_file(path: Path, f: TargetFunction, args) -> NeuronParams:
    from .sigma import piece_coefficients

    values = _read_params(path)
    try:
        sp = SigmaParams(Fraction(values.get("alpha", "1")), Fraction(values.get("lambda", "1/2")))
        poly = RationalPolynomial.parse(values["p"])
        placement = index_of_polynomial(poly, args.max_index_bits)
        piece = piece_coefficients(placement, sp)
        c0, c1 = _number(values["c0"]), _number(values["c1"])
        if not isinstance(c0, mpmath.mpf):
            c0, c1 = float(c0), float(c1)
        theta_text = values["theta"]
        theta = Fraction(theta_text) if theta_text != "symbolic" else None
        if theta is None and placement.is_numeric:
            raise ValueError("theta=symbolic but the polynomial has a numeric index")
        w = Fraction(values["w"])
        n = int(values.get("n", poly.degree))
    except (KeyError, ValueError) as exc:
        raise _ParseFailure(f"{path}: bad parameters ({exc})") from None
    if theta is None:
        from .solver import SymbolicTheta
        theta = SymbolicTheta(sp.alpha, f.a, f.b, placement)
    elif not placement.is_numeric:
        raise _ParseFailure(f"{path}: numeric theta but index exceeds --max-index-bits")
    return NeuronParams(c0=c0, c1=c1, w=w, theta=theta, placement=placement,
                        epsilon=float(args.eps), a=f.a, b=f.b, sigma_params=sp,
                        bernstein_degree=n, piece=piece)


def _cmd_solve(args, out) -> int:
    f = _target(args)
    params = solve(f, float(args.eps), SigmaParams(args.alpha, args.lam), args.max_index_bits)
    out.write("\n".join(_solve_lines(params, f, args)) + "\n")
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    f = _target(args)
    if args.grid < 2:
        raise _FlagError("--grid must be at least 2")
    if args.params is not None:
        try:
            params = _params_from_file(args.params, f, args)
        except OSError as exc:
            print(f"unisigma: cannot read {args.params}: {exc}", file=sys.stderr)
            return EXIT_FAIL
    else:
        params = solve(f, float(args.eps), SigmaParams(args.alpha, args.lam), args.max_index_bits)
    report = sup_error(params, f, args.grid)
    eps = float(args.eps)
    ok = report.certified_bound < eps
    out.write(f"sup_error={report.sup_error!r}\n"
              f"argmax={report.argmax!r}\n"
              f"slack={report.slack!r}\n"
              f"bound={report.certified_bound!r}\n"
              f"grid={report.grid_size}\n"
              f"path={report.path}\n"
              f"eps={eps!r}\n"
              f"pass={str(ok).lower()}\n")
    return EXIT_OK if ok else EXIT_FAIL


class _FlagError(Exception):
    pass


_COMMANDS = {"sigma": _cmd_sigma, "plot": _cmd_plot, "enum": _cmd_enum,
             "solve": _cmd_solve, "verify": _cmd_verify}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plot" and args.start >= args.stop:
        parser.error(f"--from must be below --to (got {args.start} and {args.stop})")
    if args.command == "enum" and args.n < (0 if args.kind == "r" else 1):
        parser.error(f"n out of range for {args.kind}: {args.n}")
    try:
        return _COMMANDS[args.command](args, out)
    except _FlagError as exc:
        parser.error(str(exc))
    except _ParseFailure as exc:
        print(f"unisigma: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
