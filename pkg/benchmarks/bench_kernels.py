"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each row
reports the best-of-N wall time per call for both backends, the speedup and
the largest relative difference between their outputs.
"""

import argparse
import math
import timeit

import numpy as np

import ppdcone
from ppdcone import _backend, funcs, specfun
from ppdcone.transform import fourier_radial


def _cases():
    rng = np.random.default_rng(0)
    phi = funcs.make_phi()
    breaks, centers, coefs = phi.poly._eval_data()
    x = rng.uniform(-0.5, 2.5, 200_000)
    z_small = rng.uniform(-6, 6, 50_000) + 1j * rng.uniform(-3, 3, 50_000)
    nodes, weights = specfun._jacobi_rule(0.3, 64)
    z_mid = rng.uniform(6, 25, 20_000) + 1j * rng.uniform(-5, 5, 20_000)
    xi = np.linspace(0.01, 20.0, 400)
    wendland = funcs.wendland33()

    return [
        ("ppoly_eval (2e5 points)",
         lambda: _backend.ppoly_eval(breaks, coefs, centers, x)),
        ("calj_series (5e4 points)",
         lambda: _backend.calj_series(0.3, 1.0 / math.gamma(1.3) / 2**0.3, z_small)),
        ("jacobi_cos_sum (2e4 points, 64 nodes)",
         lambda: _backend.jacobi_cos_sum(nodes, weights, z_mid)),
        ("bessel_kernel order 1.3 (5e4 points)",
         lambda: specfun.bessel_kernel(1.3, z_small)),
        ("fourier_radial wendland33 quadrature (400 xi)",
         lambda: fourier_radial(wendland, xi, method="quadrature")),
    ]


def _time(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if "compiled" not in ppdcone.available_backends():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    header = f"{'kernel':<48}{'compiled [ms]':>15}{'python [ms]':>14}{'speedup':>10}{'max rel diff':>15}"
    print(header)
    print("-" * len(header))
    for name, fn in _cases():
        ppdcone.use_backend("compiled")
        t_c = _time(fn, args.repeat)
        out_c = np.asarray(fn())
        ppdcone.use_backend("python")
        t_p = _time(fn, args.repeat)
        out_p = np.asarray(fn())
        scale = np.maximum(np.abs(out_c), 1e-300)
        diff = float(np.max(np.abs(out_c - out_p) / np.maximum(scale, np.max(np.abs(out_c)) * 1e-12)))
        print(f"{name:<48}{1e3 * t_c:>15.3f}{1e3 * t_p:>14.3f}{t_p / t_c:>10.1f}{diff:>15.2e}")
    ppdcone.use_backend("compiled")


if __name__ == "__main__":
    main()
