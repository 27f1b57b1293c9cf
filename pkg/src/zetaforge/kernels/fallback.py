"""Pure-Python (numpy) implementations of the hot kernels.

Series sums are evaluated blockwise: numpy's pairwise summation inside a
block, `math.fsum` across block partials.  That keeps the absolute error
near 1e-15 * sum|term|, comfortably inside the tolerances used by the
oracle layer, without a compiled compensated loop.
"""

from __future__ import annotations

import math

import numpy as np

_BLOCK = 1 << 19


def _block_ranges(m_cut: int):
    start = 1
    while start <= m_cut:
        stop = min(start + _BLOCK, m_cut + 1)
        yield np.arange(start, stop, dtype=np.float64)
        start = stop


def monomial_series_sum(t: int, k: int, r: int, s: int, m_cut: int) -> float:
    """sum_{m=1}^{m_cut} w_t(m) * K_k(m; r, s) in float64."""
    fact = float(math.factorial(t - 1))
    partials = []
    for m in _block_ranges(m_cut):
        w = np.ones_like(m)
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
        partials.append(float(np.sum(w * kern)))
    return math.fsum(partials)


def shifted_power_sum(a: int, j: int, m_cut: int) -> float:
    """sum_{m=1}^{m_cut} 1/(m+j)^a in float64."""
    partials = []
    for m in _block_ranges(m_cut):
        base = 1.0 / (m + j)
        acc = base.copy()
        for _ in range(a - 1):
            acc *= base
        partials.append(float(np.sum(acc)))
    return math.fsum(partials)


def mc_eval2(n: int, x, y, out) -> None:
    """Square-family integrand (x(1-x)y(1-y))^n / (1-xy)^(n+1)."""
    u = 1.0 - x * y
    np.copyto(out, 1.0 / u)
    if n:
        out *= (x * (1.0 - x) * y * (1.0 - y) / u) ** n


def mc_eval3(n: int, x, y, z, out) -> None:
    """Cube-family integrand (x(1-x)y(1-y)z(1-z))^n / (1-(1-xy)z)^(n+1)."""
    den = 1.0 - (1.0 - x * y) * z
    np.copyto(out, 1.0 / den)
    if n:
        out *= (x * (1.0 - x) * y * (1.0 - y) * z * (1.0 - z) / den) ** n


def mc_eval4(n: int, x, y, z, w, out) -> None:
    """4-cube integrand with the (1-xy)^(2n+1) bridge factor."""
    u = 1.0 - x * y
    dz = 1.0 - u * z
    dw = 1.0 - u * w
    np.copyto(out, u / (dz * dw))
    if n:
        core = x * (1.0 - x) * y * (1.0 - y) * z * (1.0 - z) * w * (1.0 - w)
        out *= (core * u * u / (dz * dw)) ** n
