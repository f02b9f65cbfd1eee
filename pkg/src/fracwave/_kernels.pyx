# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""

from libc.math cimport cos, sin, exp, pow, M_PI


def series_horner(const double[::1] z, const double[::1] coeffs, double[::1] out):
    cdef Py_ssize_t i, n
    cdef Py_ssize_t m = coeffs.shape[0]
    cdef double acc, zi
    with nogil:
        for i in range(z.shape[0]):
            zi = z[i]
            acc = coeffs[m - 1]
            for n in range(m - 2, -1, -1):
                acc = acc * zi + coeffs[n]
            out[i] = acc


cdef inline double _residues(double x, double alpha, double beta) nogil:
    cdef double rad = pow(x, 1.0 / alpha)
    cdef double ang = M_PI / alpha
    return (2.0 / alpha) * pow(rad, 1.0 - beta) * exp(rad * cos(ang)) * cos(
        rad * sin(ang) + (1.0 - beta) * ang)


def ml_large(const double[::1] x, double[::1] out, double alpha, double beta,
             const double[::1] a_re, const double[::1] a_im,
             const double[::1] b_re, const double[::1] b_im,
             const double[::1] asym, double x_asym,
             bint contour_residue, bint has_poles):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t nn = a_re.shape[0]
    cdef Py_ssize_t na = asym.shape[0]
    cdef double xi, acc, re, y
    with nogil:
        for i in range(x.shape[0]):
            xi = x[i]
            if xi < x_asym:
                acc = 0.0
                for j in range(nn):
                    re = a_re[j] + xi
                    acc = acc + (b_im[j] * re - b_re[j] * a_im[j]) / (re * re + a_im[j] * a_im[j])
                if contour_residue:
                    acc = acc + _residues(xi, alpha, beta)
            else:
                y = -1.0 / xi
                acc = 0.0
                for j in range(na - 1, -1, -1):
                    acc = (acc + asym[j]) * y
                acc = -acc
                if has_poles:
                    acc = acc + _residues(xi, alpha, beta)
            out[i] = acc


def weighted_history(const double[:, ::1] prim, const double[:, ::1] forcing, double[::1] out):
    cdef Py_ssize_t n = prim.shape[0] - 1
    cdef Py_ssize_t nk = prim.shape[1]
    cdef Py_ssize_t j, k
    with nogil:
        for k in range(nk):
            out[k] = 0.0
        if n >= 2:
            for j in range(n - 1):
                for k in range(nk):
                    out[k] += (prim[j, k] - prim[j + 1, k]) * forcing[j + 1, k]
