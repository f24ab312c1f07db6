"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def _neumaier_add(s, c, v):
    t = s + v
    big = np.abs(s) >= np.abs(v)
    c = c + np.where(big, (s - t) + v, (v - t) + s)
    return t, c


def calj_series(lam, first, z, max_terms=400):
    z = np.asarray(z, dtype=np.complex128)
    q = -z * z / 4.0
    term = np.full(z.shape, first, dtype=np.complex128)
    sr, si = term.real.copy(), term.imag.copy()
    cr, ci = np.zeros_like(sr), np.zeros_like(si)
    kmin = np.abs(z) / 2.0
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, max_terms):
        term = np.where(active, term * q / (k * (k + lam)), 0.0)
        sr, cr = _neumaier_add(sr, cr, term.real)
        si, ci = _neumaier_add(si, ci, term.imag)
        mag = np.abs(term.real) + np.abs(term.imag)
        done = (mag <= 1e-18 * (np.abs(sr) + np.abs(si))) & (k > kmin)
        active &= ~done
        if not active.any():
            break
    return (sr + cr) + 1j * (si + ci)


def jacobi_cos_sum(nodes, weights, z, chunk=2048):
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty(z.shape, dtype=np.complex128)
    for start in range(0, z.size, chunk):
        zz = z[start:start + chunk]
        out[start:start + chunk] = np.cos(np.outer(zz, nodes)) @ weights
    return out


def ppoly_eval(breaks, coefs, centers, x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape)
    inside = (x >= breaks[0]) & (x < breaks[-1])
    if not inside.any():
        return out
    xi = x[inside]
    idx = np.searchsorted(breaks, xi, side="right") - 1
    c = coefs[idx]
    u = xi - centers[idx]
    acc = c[:, -1].copy()
    for j in range(coefs.shape[1] - 2, -1, -1):
        acc = acc * u + c[:, j]
    out[inside] = acc
    return out
