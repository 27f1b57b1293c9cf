"""Reduction of the hypercube integral families to two-dimensional pieces.

Three families over the open unit hypercube, indexed by a depth n >= 0:

  zeta2:  (x(1-x)y(1-y))^n / (1-xy)^(n+1)                          (square)
  zeta3:  (x(1-x)y(1-y)z(1-z))^n / (1-(1-xy)z)^(n+1)               (cube)
  zeta4:  ((x(1-x)y(1-y)z(1-z)w(1-w))^n (1-xy)^(2n+1)) /
              ((1-(1-xy)z)^(n+1) (1-(1-xy)w)^(n+1))                (4-cube)

Integrating out the inner variables leaves polynomial-times-log pieces over
the square.  The key closed form, with u = 1-xy and L(u) = -log(1-u):

    J_n(u) = integral_0^1 (z(1-z))^n / (1-uz)^(n+1) dz
           = (P_n(u) + Q_n(u) L(u)) / u^(2n+1),

with P_n, Q_n in Z[u] computed exactly here.  Substituting v = 1-uz turns
the integrand into sum_d g_d(u) v^(d-n-1) with
(1-v)^n (v-(1-u))^n = sum_d g_d(u) v^d; the v-integral of each power is
elementary, the d = n term contributes the log, and the d < n terms divide
exactly by (1-u)^(n-d).

The zeta3 family needs one factor J_n; the zeta4 family needs J_n^2 (the z
and w integrals are identical); squaring gives log powers k = 0, 1, 2 with
a sign convention that matches the series kernels: with L = -log(xy),
(P + Q L)^2 contributes P^2 (k=0), -2PQ -> k=1 kernel, Q^2 -> k=2 kernel.
Any overall power of u in a combination cancels against u^(2n+1) before the
remaining u-polynomial is rewritten in powers of (1-xy).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

from .exact import (
    PolyQ,
    up_add,
    up_divmod,
    up_mul,
    up_neg,
    up_scale,
    up_sub,
    up_valuation,
)
from .forms import ZetaForm
from .series import XY_VARS, IntegrandPiece, integrate_piece

FAMILIES = ("zeta2", "zeta3", "zeta4")
U_VAR = ("u",)
MAX_DEPTH = 12


@dataclass(frozen=True)
class FamilySpec:
    """One member of an integral family: family name plus depth n."""

    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not 0 <= self.n <= MAX_DEPTH:
            raise ValueError(f"depth must be in [0, {MAX_DEPTH}]")


@dataclass(frozen=True)
class InnerProfile:
    """Closed form of the inner integral: J_n(u) = (P + Q L(u)) / u^(2n+1)."""

    n: int
    p: PolyQ
    q: PolyQ

    def value_at_zero(self) -> Fraction:
        """Limit u -> 0 of J_n, which equals the Beta moment (n!)^2/(2n+1)!."""
        return Fraction(factorial(self.n) ** 2, factorial(2 * self.n + 1))


def inner_profile(n: int) -> InnerProfile:
    """Exact P_n, Q_n with J_n(u) = (P_n + Q_n L)/u^(2n+1); see module doc."""
    if n < 0:
        raise ValueError("depth must be >= 0")
    w0 = [Fraction(1), Fraction(-1)]  # 1 - u
    # g_d(u): coefficient of v^d in (1-v)^n (v - (1-u))^n
    g = [[] for _ in range(2 * n + 1)]
    w0_pow = [[Fraction(1)]]
    for _ in range(n):
        w0_pow.append(up_mul(w0_pow[-1], w0))
    for i in range(n + 1):  # (1-v)^n term: (-1)^i C(n,i) v^i
        ai = Fraction((-1) ** i * comb(n, i))
        for jj in range(n + 1):  # (v-w0)^n term: C(n,jj) (-w0)^(n-jj) v^jj
            scale = ai * comb(n, jj) * (-1) ** (n - jj)
            g[i + jj] = up_add(g[i + jj], up_scale(w0_pow[n - jj], scale))
    q = g[n]
    p: list = []
    for d in range(2 * n + 1):
        if d == n:
            continue
        md = d - n
        if md > 0:
            shifted = up_mul(g[d], w0_pow_extend(w0_pow, w0, md))
        else:
            shifted, rem = up_divmod(g[d], w0_pow[-md])
            assert not rem, "g_d must divide exactly by (1-u)^(n-d)"
        p = up_sub(p, up_scale(up_sub(shifted, g[d]), Fraction(1, md)))
    assert up_valuation(p) >= 1 or not p, "P_n must vanish at u = 0"
    return InnerProfile(n, PolyQ.from_upoly(U_VAR, p), PolyQ.from_upoly(U_VAR, q))


def w0_pow_extend(cache, w0, e):
    while len(cache) <= e:
        cache.append(up_mul(cache[-1], w0))
    return cache[e]


def base_polynomial(n: int) -> PolyQ:
    """((x - x^2)(y - y^2))^n as a sparse polynomial in (x, y)."""
    x = PolyQ.variable(XY_VARS, "x")
    y = PolyQ.variable(XY_VARS, "y")
    return ((x - x * x) * (y - y * y)) ** n


def u_to_xy(coeffs) -> PolyQ:
    """Rewrite sum_i c_i u^i with u = 1 - xy as a polynomial in (x, y)."""
    one_m_xy = PolyQ.constant(XY_VARS, 1) - PolyQ.variable(XY_VARS, "x") * PolyQ.variable(XY_VARS, "y")
    out = PolyQ(XY_VARS)
    power = PolyQ.constant(XY_VARS, 1)
    for c in coeffs:
        if c:
            out = out + power * c
        power = power * one_m_xy
    return out


def assemble_pieces(spec: FamilySpec) -> list[IntegrandPiece]:
    """Split a family member into log-power pieces over the square.

    Every piece numerator carries the base factor ((x-x^2)(y-y^2))^n; the
    remaining u-polynomial has its full power of u cancelled against
    u^(2n+1), so the denominators (1-xy)^t appear at the lowest possible
    power t = 2n+1 - val_u.
    """
    n = spec.n
    base = base_polynomial(n)
    if spec.family == "zeta2":
        return [IntegrandPiece(base, n + 1, 0)]

    prof = inner_profile(n)
    p = prof.p.to_upoly()
    q = prof.q.to_upoly()
    if spec.family == "zeta3":
        combos = [(0, p), (1, up_neg(q))]
    else:
        combos = [(0, up_mul(p, p)), (1, up_scale(up_mul(p, q), -2)), (2, up_mul(q, q))]

    t_top = 2 * n + 1
    pieces = []
    for k, upoly in combos:
        if not upoly:
            continue
        val = min(up_valuation(upoly), t_top)
        numer = u_to_xy(upoly[val:]) * base
        pieces.append(IntegrandPiece(numer, t_top - val, k))
    return pieces


def compute_form(spec: FamilySpec, cache: "FormCache | None" = None) -> ZetaForm:
    """Exact linear form in zeta values for one family member."""
    if cache is not None:
        cached = cache.load(spec)
        if cached is not None:
            return cached
    total = ZetaForm.zero()
    for piece in assemble_pieces(spec):
        total = total + integrate_piece(piece)
    if cache is not None:
        cache.store(spec, total)
    return total


class FormCache:
    """Deterministic on-disk cache of computed forms.

    One JSON file per (family, n) whose bytes are a pure function of the
    result: keys sorted, fixed separators, trailing newline, written via
    rename so rerunning a computation reproduces the file byte for byte.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, spec: FamilySpec) -> Path:
        return self.directory / f"{spec.family}_{spec.n}.json"

    @staticmethod
    def record_bytes(spec: FamilySpec, form: ZetaForm) -> bytes:
        record = form.to_record(family=spec.family, n=spec.n)
        return (json.dumps(record, sort_keys=True, indent=2) + "\n").encode()

    def load(self, spec: FamilySpec) -> ZetaForm | None:
        path = self.path_for(spec)
        if not path.exists():
            return None
        with open(path, "rb") as fh:
            record = json.loads(fh.read().decode())
        return ZetaForm.from_record(record)

    def store(self, spec: FamilySpec, form: ZetaForm) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(spec)
        payload = self.record_bytes(spec, form)
        if path.exists():
            # Cache hits must never rewrite: verify instead.
            with open(path, "rb") as fh:
                if fh.read() != payload:
                    raise ValueError(f"cache file {path} disagrees with recomputation")
            return path
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return path
