"""Pure numpy implementations of the hot kernels.

Each function mirrors a routine of the compiled ``_kernels`` extension with an
identical signature; results are written into ``out``.
"""

import numpy as np

_CHUNK = 2048


def series_horner(z, coeffs, out):
    """Evaluate ``sum_n coeffs[n] * z**n`` by Horner's rule."""
    acc = np.full(z.shape, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc *= z
        acc += c
    out[:] = acc


def _residues(x, alpha, beta):
    # conjugate pole pair s = x^(1/alpha) exp(+-i pi/alpha), residue s^(1-beta) e^s / alpha
    rad = x ** (1.0 / alpha)
    ang = np.pi / alpha
    return (2.0 / alpha) * rad ** (1.0 - beta) * np.exp(rad * np.cos(ang)) * np.cos(
        rad * np.sin(ang) + (1.0 - beta) * ang
    )


def ml_large(x, out, alpha, beta, a_re, a_im, b_re, b_im, asym, x_asym,
             contour_residue, has_poles):
    """E_{alpha,beta}(-x) for x > 1 by contour node sum or asymptotic series."""
    near = x < x_asym
    xs = x[near]
    vals = np.empty(xs.shape)
    for lo in range(0, xs.size, _CHUNK):
        xc = xs[lo:lo + _CHUNK, None]
        re = a_re[None, :] + xc
        vals[lo:lo + _CHUNK] = ((b_im * re - b_re * a_im) / (re * re + a_im * a_im)).sum(axis=1)
    if contour_residue:
        vals += _residues(xs, alpha, beta)
    out[near] = vals

    far = ~near
    xf = x[far]
    y = -1.0 / xf
    acc = np.zeros(xf.shape)
    for c in asym[::-1]:
        acc += c
        acc *= y
    vals = -acc
    if has_poles:
        vals += _residues(xf, alpha, beta)
    out[far] = vals


def weighted_history(prim, forcing, out):
    """Memory term of the product-integration rule.

    ``prim`` holds primitive values at the n+1 lags ``t_n - t_j``; the weight of
    source interval j is ``prim[j] - prim[j+1]``. Accumulates
    ``sum_{j<n-1} w_j * forcing[j+1]`` into ``out`` and returns nothing.
    """
    n = prim.shape[0] - 1
    if n < 2:
        out[:] = 0.0
        return
    w = prim[:n - 1] - prim[1:n]
    np.einsum("jk,jk->k", w, forcing[1:n], out=out)
