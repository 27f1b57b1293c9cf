"""Exact arithmetic substrate: rationals, sparse polynomials, harmonic numbers.

Everything downstream (series reduction, integral assembly, the structural
reports) runs on `fractions.Fraction`.  Two polynomial representations are
used:

* `PolyQ` -- sparse multivariate polynomials over Q with a fixed variable
  tuple, the contract type that crosses module boundaries;
* dense coefficient lists (`list[Fraction]`, index = degree) for the
  univariate inner loops: division, Taylor recentring, power-series
  inversion.  The `up_*` helpers below operate on those.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterator, Mapping, Sequence


def as_fraction(value) -> Fraction:
    """Coerce int / Fraction / decimal-free string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q) -> str:
    """Render a rational as 'n/d', or bare 'n' when the denominator is 1."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of format_rational; accepts both 'n' and 'n/d'."""
    return Fraction(text.strip())


def lcm_upto(n: int) -> int:
    """lcm(1, 2, ..., n) as an exact integer; lcm_upto(0) = lcm_upto(1) = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    acc = 1
    for i in range(2, n + 1):
        acc = math.lcm(acc, i)
    return acc


class HarmonicCache:
    """Generalized harmonic numbers H_j^(a) = sum_{i<=j} 1/i^a, memoised.

    Grows prefix-sum tables per exponent `a` on demand.  Thread safe: the
    tables are only appended to under a lock and reads return immutable
    Fractions.
    """

    def __init__(self):
        self._tables: dict[int, list[Fraction]] = {}
        self._lock = threading.Lock()

    def value(self, j: int, a: int) -> Fraction:
        if j < 0:
            raise ValueError("harmonic index must be >= 0")
        if a < 1:
            raise ValueError("harmonic exponent must be >= 1")
        with self._lock:
            table = self._tables.setdefault(a, [Fraction(0)])
            while len(table) <= j:
                i = len(table)
                table.append(table[-1] + Fraction(1, i**a))
            return table[j]


_HARMONIC = HarmonicCache()


def harmonic(j: int, a: int) -> Fraction:
    """H_j^(a); harmonic(0, a) == 0 for every a >= 1."""
    return _HARMONIC.value(j, a)


# ---------------------------------------------------------------------------
# Dense univariate polynomials: list[Fraction], index = degree, [] = zero.
# ---------------------------------------------------------------------------

UPoly = list


def up_trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def up_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return up_trim(out)


def up_neg(a):
    return [-v for v in a]


def up_sub(a, b):
    return up_add(a, up_neg(b))


def up_scale(a, s):
    s = as_fraction(s)
    if not s:
        return []
    return [v * s for v in a]


def up_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if not va:
            continue
        for j, vb in enumerate(b):
            out[i + j] += va * vb
    return up_trim(out)


def up_pow(a, e: int):
    out = [Fraction(1)]
    for _ in range(e):
        out = up_mul(out, a)
    return out


def up_divmod(num, den):
    """Exact polynomial division over Q: num = q*den + r with deg r < deg den."""
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    up_trim(rem)
    dn = len(den) - 1
    lead = den[-1]
    if len(rem) - 1 < dn:
        return [], rem
    quo = [Fraction(0)] * (len(rem) - dn)
    while len(rem) - 1 >= dn and rem:
        shift = len(rem) - 1 - dn
        coef = rem[-1] / lead
        quo[shift] = coef
        for i, v in enumerate(den):
            rem[shift + i] -= coef * v
        up_trim(rem)
    return up_trim(quo), rem


def up_eval(c, x):
    """Horner evaluation; works for Fraction and mpmath arguments alike."""
    acc = 0 * x
    for v in reversed(c):
        acc = acc * x + v
    return acc


def up_shift(c, h):
    """Taylor recentring: returns p(X + h) as coefficients in X."""
    h = as_fraction(h)
    n = len(c)
    out = [Fraction(0)] * n
    for i, v in enumerate(c):
        if not v:
            continue
        # v * (X + h)^i
        hp = Fraction(1)
        for k in range(i, -1, -1):
            out[k] += v * math.comb(i, k) * hp
            hp *= h
    return up_trim(out)


def up_compose_1mq(c):
    """Substitute X -> 1 - q: returns coefficients of p(1 - q) in q."""
    out = []
    power = [Fraction(1)]  # (1-q)^i
    for v in c:
        if v:
            out = up_add(out, up_scale(power, v))
        power = up_mul(power, [Fraction(1), Fraction(-1)])
    return out


def up_series_inv(c, order: int):
    """Power-series inverse of c (c[0] != 0), truncated below `order`."""
    if not c or not c[0]:
        raise ZeroDivisionError("series inverse needs a unit constant term")
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, order):
        acc = Fraction(0)
        for i in range(1, min(k, len(c) - 1) + 1):
            acc += c[i] * out[k - i]
        out.append(-inv0 * acc)
    return out


def up_series_mul(a, b, order: int):
    """Product of two series truncated below `order`."""
    out = [Fraction(0)] * order
    for i, va in enumerate(a):
        if i >= order or not va:
            continue
        for j, vb in enumerate(b):
            if i + j >= order:
                break
            out[i + j] += va * vb
    return up_trim(out)


def up_valuation(c) -> int:
    """Order of vanishing at 0 (number of leading zero coefficients)."""
    for i, v in enumerate(c):
        if v:
            return i
    return len(c)


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials over Q.
# ---------------------------------------------------------------------------


class PolyQ:
    """Sparse polynomial over Q with a fixed, ordered variable tuple.

    Terms map exponent tuples to nonzero Fraction coefficients.  Arithmetic
    between two PolyQ values requires identical variable tuples; scalars
    (int / Fraction) mix freely.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] = ()):
        self.vars = tuple(variables)
        clean: dict[tuple, Fraction] = {}
        for exps, coef in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.vars):
                raise ValueError("exponent tuple arity mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            coef = as_fraction(coef)
            if coef:
                clean[exps] = coef
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, variables, value) -> "PolyQ":
        value = as_fraction(value)
        zero = (0,) * len(tuple(variables))
        return cls(variables, {zero: value} if value else {})

    @classmethod
    def variable(cls, variables, name) -> "PolyQ":
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def monomials(self) -> Iterator[tuple[tuple, Fraction]]:
        """Deterministic (exponents, coefficient) iteration."""
        for exps in sorted(self.terms):
            yield exps, self.terms[exps]

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "PolyQ"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, PolyQ):
            other = PolyQ.constant(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for exps, coef in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coef
        return PolyQ(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PolyQ):
            other = PolyQ.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            scalar = as_fraction(other)
            return PolyQ(self.vars, {e: c * scalar for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                terms[key] = terms.get(key, Fraction(0)) + ca * cb
        return PolyQ(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = PolyQ.constant(self.vars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyQ.constant(self.vars, other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps, coef in self.monomials():
            factors = []
            for var, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(var)
                elif e > 1:
                    factors.append(f"{var}^{e}")
            if not factors:
                bits.append(format_rational(coef))
            elif coef == 1:
                bits.append("*".join(factors))
            elif coef == -1:
                bits.append("-" + "*".join(factors))
            else:
                bits.append(format_rational(coef) + "*" + "*".join(factors))
        return " + ".join(bits).replace("+ -", "- ")

    # -- conversions --------------------------------------------------

    def eval(self, values: Mapping[str, object]):
        """Evaluate at a point; values may be Fractions or mpmath numbers."""
        acc = None
        for exps, coef in self.terms.items():
            term = coef
            for var, e in zip(self.vars, exps):
                if e:
                    term = term * values[var] ** e
            acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    def to_upoly(self):
        """Coefficient list for a univariate PolyQ."""
        if len(self.vars) != 1:
            raise ValueError("to_upoly needs a univariate polynomial")
        if not self.terms:
            return []
        out = [Fraction(0)] * (max(e[0] for e in self.terms) + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    @classmethod
    def from_upoly(cls, variables, coeffs) -> "PolyQ":
        variables = tuple(variables)
        if len(variables) != 1:
            raise ValueError("from_upoly needs exactly one variable")
        return cls(variables, {(i,): c for i, c in enumerate(coeffs) if c})


def poly_pow_expand(p: PolyQ, e: int) -> PolyQ:
    """Expanded e-th power of a sparse polynomial."""
    return p**e
