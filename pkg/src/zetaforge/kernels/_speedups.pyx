# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: compensated series summation and MC batch evaluation.

Mirrors `fallback` function for function.  Series sums use Neumaier
compensation so the truncation point, not float accumulation, limits
accuracy.
"""

from libc.math cimport fabs


cdef inline double _neumaier_add(double total, double val, double* comp) nogil:
    cdef double t = total + val
    if fabs(total) >= fabs(val):
        comp[0] += (total - t) + val
    else:
        comp[0] += (val - t) + total
    return t


def monomial_series_sum(int t, int k, long r, long s, long m_cut):
    """sum_{m=1}^{m_cut} w_t(m) * K_k(m; r, s) with Neumaier compensation."""
    cdef double total = 0.0, comp = 0.0
    cdef double m, w, a, b, kern, fact = 1.0
    cdef long mi
    cdef int i
    for i in range(1, t):
        fact *= i
    for mi in range(1, m_cut + 1):
        m = <double> mi
        w = 1.0
        for i in range(t - 1):
            w *= m + i
        w /= fact
        a = m + r
        b = m + s
        if k == 0:
            kern = 1.0 / (a * b)
        elif k == 1:
            kern = -(a + b) / (a * a * b * b)
        else:
            kern = 2.0 * (a * a + a * b + b * b) / (a * a * a * b * b * b)
        total = _neumaier_add(total, w * kern, &comp)
    return total + comp


def shifted_power_sum(int a, long j, long m_cut):
    """sum_{m=1}^{m_cut} 1/(m+j)^a with Neumaier compensation."""
    cdef double total = 0.0, comp = 0.0
    cdef double base, acc
    cdef long mi
    cdef int i
    for mi in range(1, m_cut + 1):
        base = 1.0 / (<double> (mi + j))
        acc = base
        for i in range(a - 1):
            acc *= base
        total = _neumaier_add(total, acc, &comp)
    return total + comp


def mc_eval2(int n, double[::1] x, double[::1] y, double[::1] out):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double u, core
    cdef int p
    for i in range(m):
        u = 1.0 - x[i] * y[i]
        if n == 0:
            out[i] = 1.0 / u
        else:
            core = x[i] * (1.0 - x[i]) * y[i] * (1.0 - y[i]) / u
            out[i] = 1.0 / u
            for p in range(n):
                out[i] *= core


def mc_eval3(int n, double[::1] x, double[::1] y, double[::1] z, double[::1] out):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double den, core
    cdef int p
    for i in range(m):
        den = 1.0 - (1.0 - x[i] * y[i]) * z[i]
        if n == 0:
            out[i] = 1.0 / den
        else:
            core = x[i] * (1.0 - x[i]) * y[i] * (1.0 - y[i]) * z[i] * (1.0 - z[i]) / den
            out[i] = 1.0 / den
            for p in range(n):
                out[i] *= core


def mc_eval4(int n, double[::1] x, double[::1] y, double[::1] z, double[::1] w,
             double[::1] out):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double u, dz, dw, core
    cdef int p
    for i in range(m):
        u = 1.0 - x[i] * y[i]
        dz = 1.0 - u * z[i]
        dw = 1.0 - u * w[i]
        if n == 0:
            out[i] = u / (dz * dw)
        else:
            core = (x[i] * (1.0 - x[i]) * y[i] * (1.0 - y[i]) *
                    z[i] * (1.0 - z[i]) * w[i] * (1.0 - w[i]) * u * u / (dz * dw))
            out[i] = u / (dz * dw)
            for p in range(n):
                out[i] *= core
