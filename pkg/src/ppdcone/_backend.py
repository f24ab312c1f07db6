"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. :func:`use_backend` switches explicitly (the benchmark and the
backend-parity tests rely on it).
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = _compiled if _compiled is not None else _kernels_py


def available():
    """Names of the usable backends."""
    return ["compiled", "python"] if _compiled is not None else ["python"]


def current():
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use_backend(name):
    global _active
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")


def calj_series(lam, first, z):
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    return _active.calj_series(float(lam), float(first), z)


def jacobi_cos_sum(nodes, weights, z):
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    return _active.jacobi_cos_sum(
        np.ascontiguousarray(nodes, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
        z,
    )


def ppoly_eval(breaks, coefs, centers, x):
    x = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
    return _active.ppoly_eval(
        np.ascontiguousarray(breaks, dtype=np.float64),
        np.ascontiguousarray(coefs, dtype=np.float64),
        np.ascontiguousarray(centers, dtype=np.float64),
        x,
    )
