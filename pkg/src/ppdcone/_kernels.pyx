# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a numpy twin in :mod:`ppdcone._kernels_py` with the
same signature; :mod:`ppdcone._backend` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, cosh, sinh, fabs, sqrt

cnp.import_array()

ctypedef double complex cplx


cdef inline void _neumaier(double *s, double *c, double v) noexcept nogil:
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - t) + v
    else:
        c[0] += (v - t) + s[0]
    s[0] = t


def calj_series(double lam, double first, cplx[::1] z, int max_terms=400):
    """Power series of J_lam(z)/z**lam, ``first`` being the k=0 term."""
    cdef Py_ssize_t n = z.shape[0], i
    cdef int k
    out = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] o = out
    cdef cplx q, term
    cdef double sr, si, cr, ci, mag
    with nogil:
        for i in range(n):
            q = -z[i] * z[i] / 4.0
            term = first
            sr = term.real
            si = term.imag
            cr = 0.0
            ci = 0.0
            for k in range(1, max_terms):
                term = term * q / (k * (k + lam))
                _neumaier(&sr, &cr, term.real)
                _neumaier(&si, &ci, term.imag)
                mag = fabs(term.real) + fabs(term.imag)
                if mag <= 1e-18 * (fabs(sr) + fabs(si)) and k * k > 0.25 * (z[i].real * z[i].real + z[i].imag * z[i].imag):
                    break
            o[i] = (sr + cr) + 1j * (si + ci)
    return out


def jacobi_cos_sum(double[::1] nodes, double[::1] weights, cplx[::1] z):
    """sum_j weights[j] * cos(nodes[j] * z) for every entry of ``z``."""
    cdef Py_ssize_t n = z.shape[0], m = nodes.shape[0], i, j
    out = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] o = out
    cdef double a, b, sr, si, cr, ci
    with nogil:
        for i in range(n):
            sr = 0.0
            si = 0.0
            cr = 0.0
            ci = 0.0
            for j in range(m):
                a = nodes[j] * z[i].real
                b = nodes[j] * z[i].imag
                _neumaier(&sr, &cr, weights[j] * cos(a) * cosh(b))
                _neumaier(&si, &ci, -weights[j] * sin(a) * sinh(b))
            o[i] = (sr + cr) + 1j * (si + ci)
    return out


def ppoly_eval(double[::1] breaks, double[:, ::1] coefs, double[::1] centers, double[::1] x):
    """Evaluate a piecewise polynomial on ``[breaks[0], breaks[-1])``; zero outside.

    ``coefs[i]`` holds the monomial coefficients (low to high) of piece ``i``
    in the local variable ``x - centers[i]``.
    """
    cdef Py_ssize_t n = x.shape[0], npieces = coefs.shape[0], deg = coefs.shape[1] - 1
    cdef Py_ssize_t i, lo, hi, mid, j
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double xi, acc, u
    with nogil:
        for i in range(n):
            xi = x[i]
            if xi < breaks[0] or xi >= breaks[npieces]:
                continue
            lo = 0
            hi = npieces
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if breaks[mid] <= xi:
                    lo = mid
                else:
                    hi = mid
            u = xi - centers[lo]
            acc = coefs[lo, deg]
            j = deg - 1
            while j >= 0:
                acc = acc * u + coefs[lo, j]
                j -= 1
            o[i] = acc
    return out
