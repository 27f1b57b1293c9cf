"""Linear forms q0 + sum_a q_a * zeta(a) with exact rational coefficients.

The reduction pipeline produces multisets of shifted reciprocal-power terms
c/(m+j)^a.  Summing such a term over m >= 1 gives

    sum_{m>=1} c/(m+j)^a  =  c * (zeta(a) - H_j^(a))        for a >= 2,

while a = 1 terms are individually divergent: their divergence is recorded
in a ledger coefficient and only cancellation across a whole multiset
(total a = 1 coefficient zero) yields a finite value.  Polynomial-in-m
divergences from the series engine ride along in a second ledger.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import PolyQ, as_fraction, format_rational, harmonic, parse_rational

M_VAR = ("m",)


@dataclass(frozen=True, order=True)
class PFTerm:
    """One partial-fraction term c/(m+j)^a with exact rational c."""

    a: int
    j: int
    c: Fraction

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("power a must be >= 1")
        if self.j < 0:
            raise ValueError("shift j must be >= 0")
        object.__setattr__(self, "c", as_fraction(self.c))
        if not self.c:
            raise ValueError("zero coefficient")


def _zero_mpoly() -> PolyQ:
    return PolyQ(M_VAR)


class ZetaForm:
    """q0 + sum q_a zeta(a), plus two divergence ledgers.

    `div_harmonic` is the net coefficient of the divergent harmonic series;
    `div_poly` collects a polynomial in the summation index whose termwise
    sum would diverge.  A form is finite iff both ledgers vanish.
    """

    __slots__ = ("rational", "zeta", "div_harmonic", "div_poly")

    def __init__(self, rational=0, zeta: Mapping[int, object] = (), div_harmonic=0, div_poly: PolyQ | None = None):
        self.rational = as_fraction(rational)
        clean: dict[int, Fraction] = {}
        for a, c in dict(zeta).items():
            a = int(a)
            if a < 2:
                raise ValueError("zeta orders start at 2")
            c = as_fraction(c)
            if c:
                clean[a] = c
        self.zeta = clean
        self.div_harmonic = as_fraction(div_harmonic)
        self.div_poly = div_poly if div_poly is not None else _zero_mpoly()
        if self.div_poly.vars != M_VAR:
            raise ValueError("divergence ledger must be a polynomial in m")

    @classmethod
    def zero(cls) -> "ZetaForm":
        return cls()

    @property
    def is_finite(self) -> bool:
        return not self.div_harmonic and self.div_poly.is_zero()

    def zeta_orders(self) -> tuple[int, ...]:
        return tuple(sorted(self.zeta))

    def coefficient(self, a: int) -> Fraction:
        """q_a; order 1 aliases the rational part for uniform access."""
        if a == 1:
            return self.rational
        return self.zeta.get(a, Fraction(0))

    # -- algebra ------------------------------------------------------

    def scaled(self, s) -> "ZetaForm":
        s = as_fraction(s)
        return ZetaForm(
            self.rational * s,
            {a: c * s for a, c in self.zeta.items()},
            self.div_harmonic * s,
            self.div_poly * s,
        )

    def __add__(self, other: "ZetaForm") -> "ZetaForm":
        if not isinstance(other, ZetaForm):
            return NotImplemented
        zeta = dict(self.zeta)
        for a, c in other.zeta.items():
            zeta[a] = zeta.get(a, Fraction(0)) + c
        return ZetaForm(
            self.rational + other.rational,
            zeta,
            self.div_harmonic + other.div_harmonic,
            self.div_poly + other.div_poly,
        )

    def __eq__(self, other):
        if not isinstance(other, ZetaForm):
            return NotImplemented
        return (
            self.rational == other.rational
            and self.zeta == other.zeta
            and self.div_harmonic == other.div_harmonic
            and self.div_poly == other.div_poly
        )

    def __hash__(self):
        return hash((self.rational, tuple(sorted(self.zeta.items())), self.div_harmonic, self.div_poly))

    def __repr__(self):
        bits = []
        if self.rational or not self.zeta:
            bits.append(format_rational(self.rational))
        for a in self.zeta_orders():
            c = self.zeta[a]
            piece = f"zeta({a})" if abs(c) == 1 else f"{format_rational(abs(c))}*zeta({a})"
            if not bits:
                bits.append(piece if c > 0 else "-" + piece)
            else:
                bits.append(("+ " if c > 0 else "- ") + piece)
        text = " ".join(bits)
        if not self.is_finite:
            text += f"  [divergent: harmonic {format_rational(self.div_harmonic)}, poly {self.div_poly!r}]"
        return text

    # -- serialization ------------------------------------------------

    def to_record(self, family: str | None = None, n: int | None = None) -> dict:
        if not self.is_finite:
            raise ValueError("only finite forms serialize to records")
        rec: dict = {}
        if family is not None:
            rec["family"] = family
        if n is not None:
            rec["n"] = n
        rec["rational"] = format_rational(self.rational)
        rec["zeta"] = {str(a): format_rational(c) for a, c in sorted(self.zeta.items())}
        rec["finite"] = True
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "ZetaForm":
        return cls(
            parse_rational(rec["rational"]),
            {int(a): parse_rational(c) for a, c in rec.get("zeta", {}).items()},
        )


def form_combine(f: ZetaForm, g: ZetaForm, scale=1) -> ZetaForm:
    """f + scale * g; ledgers combine linearly like everything else."""
    return f + g.scaled(scale)


def reduce_terms(terms: Iterable[PFTerm]) -> ZetaForm:
    """Reduce a multiset of c/(m+j)^a terms, summed over m >= 1.

    Shifted tails fold back to zeta values minus harmonic prefixes.  The
    a = 1 terms contribute -c*H_j to the rational part and c to the
    harmonic divergence ledger, so reduction stays linear term by term and
    finite multisets (ledger zero) come out exact.
    """
    rational = Fraction(0)
    zeta: dict[int, Fraction] = {}
    div = Fraction(0)
    for term in terms:
        if term.a >= 2:
            zeta[term.a] = zeta.get(term.a, Fraction(0)) + term.c
            rational -= term.c * harmonic(term.j, term.a)
        else:
            div += term.c
            rational -= term.c * harmonic(term.j, 1)
    return ZetaForm(rational, zeta, div_harmonic=div)


@dataclass(frozen=True)
class IntegerizeResult:
    """Outcome of clearing denominators of R + S*zeta(a) by a target T."""

    ok: bool
    zeta_order: int | None
    r_scaled: int | None
    s_scaled: int | None
    offending: dict

    def __bool__(self):
        return self.ok


def integerize(form: ZetaForm, target: int) -> IntegerizeResult:
    """Try to write target*form = r + s*zeta(a) with integer r, s.

    The form must be finite and supported on at most one zeta order.
    Returns the integer pair on success, or the offending denominators
    (the parts of each denominator not dividing the target).
    """
    if target <= 0:
        raise ValueError("target must be a positive integer")
    if not form.is_finite:
        raise ValueError("cannot integerize a divergent form")
    orders = form.zeta_orders()
    if len(orders) > 1:
        raise ValueError(f"form supported on several zeta orders: {orders}")
    order = orders[0] if orders else None
    s_coef = form.zeta.get(order, Fraction(0)) if order else Fraction(0)

    offending = {}
    r_scaled = form.rational * target
    s_scaled = s_coef * target
    if r_scaled.denominator != 1:
        offending["rational"] = r_scaled.denominator
    if s_scaled.denominator != 1:
        offending["zeta"] = s_scaled.denominator
    if offending:
        return IntegerizeResult(False, order, None, None, offending)
    return IntegerizeResult(True, order, int(r_scaled), int(s_scaled), {})
