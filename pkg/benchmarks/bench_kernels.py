"""Time the numba and pure-numpy kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from unisigma import _kernels
from unisigma.polynomial import RationalPolynomial, bernstein_coefficients
from unisigma.sigma import SigmaFunction


def best_of(fn, repeat: int) -> float:
    fn()  # warm up (and compile)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    sig = SigmaFunction()
    ts = np.linspace(1, 200, args.points)
    table, coeffs = sig.piece_table(100)
    k = np.floor(ts).astype(np.int64)
    kr, f = k - 2, ts - k

    p = RationalPolynomial.trimmed(np.random.default_rng(0).integers(-5, 6, 300).tolist())
    b = bernstein_coefficients(p)
    logc = _kernels.log_binomials(b.size - 1)
    xs = np.linspace(0, 1, max(args.points // 20, 1))

    cases = [
        ("sigma_grid", lambda: _kernels.sigma_grid_numpy(kr, f, 1.0, table, coeffs),
         (lambda: _kernels.sigma_grid_numba(kr, f, 1.0, table, coeffs))
         if _kernels.NUMBA_AVAILABLE else None, ts.size),
        ("bernstein_eval (deg 299)", lambda: _kernels.bernstein_eval_numpy(b, logc, xs),
         (lambda: _kernels.bernstein_eval_numba(b, logc, xs))
         if _kernels.NUMBA_AVAILABLE else None, xs.size),
    ]
    print(f"{'kernel':26} {'points':>9} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, np_fn, nb_fn, n in cases:
        t_np = best_of(np_fn, args.repeat)
        if nb_fn is None:
            print(f"{name:26} {n:9d} {t_np:10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        t_nb = best_of(nb_fn, args.repeat)
        ref = np_fn()
        assert np.allclose(ref, nb_fn(), rtol=0, atol=1e-12 * max(1.0, float(np.abs(ref).max())))
        print(f"{name:26} {n:9d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
