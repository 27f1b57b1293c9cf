"""Series engine: monomial integrals as exact sums of shifted power terms.

For a monomial x^r y^s against the standard log-weighted kernel on the unit
square,

    integral x^r y^s log^k(xy) / (1-xy)^t dx dy
        = sum_{m>=1} w_t(m) * K_k(m; r, s),

where the expansion of (1-xy)^(-t) contributes the polynomial weight

    w_t(m) = binom(m+t-2, t-1) = m(m+1)...(m+t-2) / (t-1)!

and integrating the monomial against log powers gives, with A = m+r and
B = m+s,

    K_0 = 1/(AB),   K_1 = -(A+B)/(A^2 B^2),   K_2 = 2(A^2+AB+B^2)/(A^3 B^3).

(The k = 1 sign lives in the kernel, so pieces combine additively.)

`monomial_terms` turns w_t * K_k into an exact polynomial part (divergence
ledger) plus partial fractions c/(m+j)^a via Taylor expansion around each
pole, including repeated poles when r = s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator

from .exact import (
    PolyQ,
    up_divmod,
    up_mul,
    up_series_inv,
    up_series_mul,
    up_shift,
    up_trim,
)
from .forms import M_VAR, PFTerm, ZetaForm, form_combine, reduce_terms

XY_VARS = ("x", "y")


@dataclass(frozen=True)
class RationalFunctionOfM:
    """num(m) / prod_j (m+j)^e_j with the denominator kept factored.

    `den` is a sorted tuple of (shift, multiplicity) pairs; an empty tuple
    means the function is a polynomial.
    """

    num: tuple
    den: tuple

    @classmethod
    def make(cls, num, den: dict[int, int] = ()) -> "RationalFunctionOfM":
        num = tuple(up_trim([Fraction(v) for v in num]))
        den = tuple(sorted((j, e) for j, e in dict(den).items() if e))
        return cls(num, den)

    def __mul__(self, other: "RationalFunctionOfM") -> "RationalFunctionOfM":
        merged: dict[int, int] = {}
        for j, e in self.den + other.den:
            merged[j] = merged.get(j, 0) + e
        return RationalFunctionOfM.make(up_mul(list(self.num), list(other.num)), merged)

    def den_expanded(self, skip: int | None = None):
        out = [Fraction(1)]
        for j, e in self.den:
            if j == skip:
                continue
            for _ in range(e):
                out = up_mul(out, [Fraction(j), Fraction(1)])
        return out

    def eval(self, m):
        """Evaluate at m (Fraction or mpmath float); poles raise ZeroDivisionError."""
        num = 0 * m
        for c in reversed(self.num):
            num = num * m + c
        den = 1 + 0 * m
        for j, e in self.den:
            den = den * (m + j) ** e
        return num / den


def weight(t: int) -> RationalFunctionOfM:
    """w_t(m) = m(m+1)...(m+t-2)/(t-1)!; the t = 1 weight is the constant 1."""
    if t < 1:
        raise ValueError("power t must be >= 1")
    num = [Fraction(1)]
    for i in range(t - 1):
        num = up_mul(num, [Fraction(i), Fraction(1)])
    inv = Fraction(1, factorial(t - 1))
    return RationalFunctionOfM.make([c * inv for c in num])


def dk_kernel(k: int, r: int, s: int) -> RationalFunctionOfM:
    """K_k(m; r, s) for log powers k = 0, 1, 2."""
    if r < 0 or s < 0:
        raise ValueError("monomial exponents must be >= 0")
    if k == 0:
        num = [Fraction(1)]
    elif k == 1:
        num = [Fraction(-(r + s)), Fraction(-2)]
    elif k == 2:
        num = [Fraction(2 * (r * r + r * s + s * s)), Fraction(6 * (r + s)), Fraction(6)]
    else:
        raise ValueError("log power k must be 0, 1 or 2")
    den: dict[int, int] = {r: k + 1}
    den[s] = den.get(s, 0) + k + 1
    return RationalFunctionOfM.make(num, den)


@dataclass(frozen=True)
class TermBundle:
    """Partial-fraction terms plus the divergent polynomial part.

    Iterates over the PFTerm multiset so it can be consumed anywhere a
    plain term collection is expected.
    """

    terms: tuple
    poly: tuple

    def __iter__(self) -> Iterator[PFTerm]:
        return iter(self.terms)

    def poly_ledger(self) -> PolyQ:
        return PolyQ(M_VAR, {(i,): c for i, c in enumerate(self.poly) if c})

    def to_form(self) -> ZetaForm:
        form = reduce_terms(self.terms)
        if self.poly:
            form = form + ZetaForm(div_poly=self.poly_ledger())
        return form


def partial_fractions(rf: RationalFunctionOfM) -> TermBundle:
    """Exact decomposition of a rational function of m.

    Polynomial division first (quotient goes to the divergence ledger),
    then per-pole Taylor expansion: the coefficient of 1/(m+j)^a is the
    coefficient of h^(e_j - a) in the series of rem(m)/others(m) at
    m = h - j.  Handles repeated poles exactly.
    """
    full_den = rf.den_expanded()
    quot, rem = up_divmod(list(rf.num), full_den)
    terms = []
    for j, e in rf.den:
        others = rf.den_expanded(skip=j)
        num_at = up_shift(rem, Fraction(-j))
        den_at = up_shift(others, Fraction(-j))
        series = up_series_mul(num_at, up_series_inv(den_at, e), e)
        for a in range(1, e + 1):
            idx = e - a
            coef = series[idx] if idx < len(series) else Fraction(0)
            if coef:
                terms.append(PFTerm(a, j, coef))
    terms.sort(key=lambda t: (t.j, t.a))
    return TermBundle(tuple(terms), tuple(quot))


def monomial_terms(r: int, s: int, t: int, k: int) -> TermBundle:
    """Shifted power terms for the (r, s, t, k) monomial integral."""
    return partial_fractions(weight(t) * dk_kernel(k, r, s))


@dataclass(frozen=True)
class IntegrandPiece:
    """Polynomial numerator against log^k(xy) / (1-xy)^t on the square."""

    numerator: PolyQ
    t: int
    k: int

    def __post_init__(self):
        if self.numerator.vars != XY_VARS:
            raise ValueError("piece numerator must be a polynomial in (x, y)")
        if self.t < 1:
            raise ValueError("power t must be >= 1")
        if self.k not in (0, 1, 2):
            raise ValueError("log power k must be 0, 1 or 2")


class NonCancellingDivergence(Exception):
    """A piece whose divergent parts failed to cancel after reduction."""

    def __init__(self, piece: IntegrandPiece, form: ZetaForm):
        self.piece = piece
        self.residual_harmonic = form.div_harmonic
        self.residual_poly = form.div_poly
        super().__init__(
            f"divergence survives reduction of piece (t={piece.t}, k={piece.k}): "
            f"harmonic ledger {form.div_harmonic}, poly ledger {form.div_poly!r}"
        )


def integrate_piece(piece: IntegrandPiece) -> ZetaForm:
    """Reduce a whole piece to a finite linear form in zeta values.

    Individual monomials may diverge; only the total must be finite.  A
    nonzero residual ledger means the piece does not represent a convergent
    integral and is reported as a hard error.
    """
    total = ZetaForm.zero()
    for (r, s), coef in piece.numerator.monomials():
        bundle = monomial_terms(r, s, piece.t, piece.k)
        total = form_combine(total, bundle.to_form(), coef)
    if not total.is_finite:
        raise NonCancellingDivergence(piece, total)
    return total
