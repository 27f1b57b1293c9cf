"""Independent numeric oracles for the exact reduction pipeline.

Nothing here reuses the partial-fraction machinery: zeta values come from
an Euler-Maclaurin summation written against exact Bernoulli numbers,
series are summed directly with rigorous integral-test tail intervals, and
piece integrals are evaluated by one-dimensional quadrature after an exact
change of variables.  Agreement between these routes and the exact reducer
is what the verification layer certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath as mp
import numpy as np

from . import kernels
from .exact import up_compose_1mq, up_series_mul, up_trim
from .forms import PFTerm, ZetaForm
from .reducer import FamilySpec
from .series import IntegrandPiece


class DivergentForm(Exception):
    """Numeric evaluation requested for a form with nonzero ledgers."""


class DivergentInput(Exception):
    """A series or integral that provably diverges."""


class NonConvergent(Exception):
    """Quadrature or summation failed to reach the requested accuracy."""


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta values.
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli_number(i: int) -> Fraction:
    """Exact B_i via the defining recurrence sum_j C(m+1, j) B_j = 0."""
    if i < 0:
        raise ValueError("index must be >= 0")
    while len(_BERNOULLI) <= i:
        m = len(_BERNOULLI)
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[i]


def zeta_value(a: int, digits: int = 50) -> mp.mpf:
    """zeta(a) for integer a >= 2 by Euler-Maclaurin summation.

    Partial sum to M, then integral + midpoint + Bernoulli corrections:

        zeta(a) = sum_{m<=M} m^-a + M^(1-a)/(a-1) - M^-a/2
                  + sum_i B_{2i}/(2i)! * a(a+1)...(a+2i-2) * M^(1-a-2i).

    Terms shrink until 2i ~ 2*pi*M, so M is sized from the digit target and
    doubled if the correction series bottoms out too early.
    """
    if a < 2:
        raise ValueError("zeta order must be >= 2")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    with mp.workdps(digits + 15):
        target = mp.mpf(10) ** (-(digits + 10))
        m_top = max(8, int(0.37 * (digits + 10)) + 6)
        while True:
            total = _zeta_em(a, m_top, target)
            if total is not None:
                break
            m_top *= 2
    with mp.workdps(digits):
        return +total


def _zeta_em(a: int, m_top: int, target):
    """One Euler-Maclaurin attempt; None if corrections stall above target."""
    mf = mp.mpf(m_top)
    total = mp.fsum(mp.mpf(1) / mp.mpf(m) ** a for m in range(1, m_top + 1))
    total += mf ** (1 - a) / (a - 1) - mf ** (-a) / 2
    poch = mp.mpf(a)  # a(a+1)...(a+2i-2)
    power = mf ** (-a - 1)
    inv_m2 = 1 / (mf * mf)
    prev = mp.inf
    i = 1
    while True:
        b = bernoulli_number(2 * i)
        term = mp.mpf(b.numerator) / b.denominator / mp.factorial(2 * i) * poch * power
        if abs(term) < target:
            return total + term
        if abs(term) >= prev:
            return None  # asymptotic series turned; need larger M
        total += term
        prev = abs(term)
        poch *= (a + 2 * i - 1) * (a + 2 * i)
        power *= inv_m2
        i += 1


def eval_form(form: ZetaForm, digits: int = 50) -> mp.mpf:
    """High-precision value of a finite linear form in zeta values."""
    if not form.is_finite:
        raise DivergentForm(f"form carries divergence ledgers: {form!r}")
    with mp.workdps(digits + 10):
        acc = mp.mpf(form.rational.numerator) / form.rational.denominator
        for a, c in sorted(form.zeta.items()):
            acc += mp.mpf(c.numerator) / c.denominator * zeta_value(a, digits + 10)
    with mp.workdps(digits):
        return +acc


# ---------------------------------------------------------------------------
# Direct series summation with rigorous tail intervals.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailedSum:
    """Direct summation result: midpoint estimate plus an enclosing interval."""

    value: mp.mpf
    lower: mp.mpf
    upper: mp.mpf
    m_cut: int
    digits: int

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self):
        return self.upper - self.lower


def sum_terms_numeric(terms, m_cut: int = 100_000, digits: int = 30) -> TailedSum:
    """Sum a multiset of c/(m+j)^a terms over m >= 1 head-on.

    The head (m <= m_cut) is summed in compensated float64.  Tails use the
    integral test per term: for a >= 2 each tail lies between the integral
    from m_cut and from m_cut+1.  The a = 1 terms must cancel in total
    (otherwise DivergentInput); their combined tail is rewritten against the
    smallest shift j0,

        sum_j c_j/(m+j) = sum_j c_j (j0-j) / ((m+j)(m+j0)),

    each summand monotone with elementary antiderivative
    -c_j log((x+j)/(x+j0)), so the same two-sided integral test applies.
    The returned interval always contains the exact value of the reduced
    form; `value` is the midpoint-rule estimate.
    """
    terms = [t if isinstance(t, PFTerm) else PFTerm(*t) for t in terms]
    if m_cut < 10:
        raise ValueError("m_cut too small for a meaningful tail split")
    ones = [t for t in terms if t.a == 1]
    if ones:
        total_one = sum(t.c for t in ones)
        if total_one:
            raise DivergentInput(f"a=1 coefficients sum to {total_one}, series diverges")

    head = math.fsum(
        float(t.c) * kernels.shifted_power_sum(t.a, t.j, m_cut) for t in terms
    )
    coef_scale = sum(abs(float(t.c)) for t in terms)

    with mp.workdps(digits + 10):
        m0 = mp.mpf(m_cut)
        lo = hi = mid = mp.mpf(0)

        def add_bracket(anti):
            """Integral-test bracket for one monotone term; anti(x) = integral_x^inf."""
            nonlocal lo, hi, mid
            v0, v1 = anti(m0), anti(m0 + 1)
            lo += min(v0, v1)
            hi += max(v0, v1)
            mid += anti(m0 + mp.mpf("0.5"))

        for t in terms:
            if t.a >= 2:
                c = mp.mpf(t.c.numerator) / t.c.denominator
                a, j = t.a, t.j
                add_bracket(lambda x, c=c, a=a, j=j: c * (x + j) ** (1 - a) / (a - 1))
        if ones:
            j0 = min(t.j for t in ones)
            for t in ones:
                if t.j == j0:
                    continue
                c = mp.mpf(t.c.numerator) / t.c.denominator
                j = t.j
                add_bracket(lambda x, c=c, j=j, j0=j0: -c * mp.log((x + j) / (x + j0)))

        pad = mp.mpf("1e-12") * (1 + coef_scale) + mp.mpf("1e-15") * abs(mp.mpf(head))
        value = head + mid
        lower = head + lo - pad
        upper = head + hi + pad
    with mp.workdps(digits):
        return TailedSum(+value, +lower, +upper, m_cut, digits)


def monomial_direct(r: int, s: int, t: int, k: int, m_cut: int = 1_000_000,
                    digits: int = 30) -> mp.mpf:
    """Direct value of the (r, s, t, k) monomial series, no partial fractions.

    Convergence requires the summand to decay like m^(t-k-3), i.e. t <= k+1.
    The head runs through the compiled kernel; the tail is the integral of
    the same summand from m_cut + 1/2, whose midpoint-rule error is far
    below the float64 head error.
    """
    if t - k - 3 > -2:
        raise DivergentInput(f"summand decays like m^{t - k - 3}; series diverges")
    head = kernels.monomial_series_sum(t, k, r, s, m_cut)
    with mp.workdps(digits + 10):
        fact = mp.factorial(t - 1)

        def summand(x):
            w = mp.mpf(1)
            for i in range(t - 1):
                w *= x + i
            w /= fact
            a = x + r
            b = x + s
            if k == 0:
                kern = 1 / (a * b)
            elif k == 1:
                kern = -(a + b) / (a * a * b * b)
            else:
                kern = 2 * (a * a + a * b + b * b) / (a * a * a * b * b * b)
            return w * kern

        tail = mp.quad(summand, [m_cut + mp.mpf("0.5"), mp.inf])
        value = head + tail
    with mp.workdps(digits):
        return +value


# ---------------------------------------------------------------------------
# Quadrature of integrand pieces via exact reduction to one dimension.
# ---------------------------------------------------------------------------


def _piece_profile(piece: IntegrandPiece):
    """Exact 1-D profile of a piece under p = xy (Fubini on the square).

    integral of x^r y^s h(xy) dx dy = integral of h(p) * phi_{r,s}(p) dp with
    phi = p^min(r,s) (1 - p^|r-s|)/|r-s| for r != s and -p^r log p for r = s.
    Splitting off the extra log for the diagonal terms leaves

        piece = integral_0^1 [A(p) log^k p + B(p) log^(k+1) p] / (1-p)^t dp

    with A, B exact polynomials assembled from the numerator monomials.
    """
    a_poly: list = []
    b_poly: list = []

    def bump(poly, e, c):
        while len(poly) <= e:
            poly.append(Fraction(0))
        poly[e] += c

    for (r, s), c in piece.numerator.monomials():
        if r == s:
            bump(b_poly, r, -c)
        else:
            e, d = min(r, s), abs(r - s)
            bump(a_poly, e, c / d)
            bump(a_poly, e + d, -c / d)
    return up_trim(a_poly), up_trim(b_poly)


def quad_piece(piece: IntegrandPiece, digits: int = 30) -> mp.mpf:
    """Numeric value of a piece by 1-D quadrature, corner-safe to p = 1.

    On [0, 3/4] tanh-sinh quadrature handles the logarithmic endpoint at 0.
    On [3/4, 1] the integrand is expanded exactly: with q = 1-p and
    log p = -q * lam(q), lam = sum q^i/(i+1), the integrand equals
    (-1)^k q^(k-t) C(q) for an explicitly computed rational power series C.
    Integrability forces the first t-k coefficients of C to vanish -- this
    is checked exactly and doubles as a divergence certificate -- and the
    remainder integrates termwise.
    """
    a_poly, b_poly = _piece_profile(piece)
    t, k = piece.t, piece.k

    order = 2 * digits + t + max(len(a_poly), len(b_poly), 1) + 50
    lam = [Fraction(1, i + 1) for i in range(order)]
    lam_k = [Fraction(1)]
    for _ in range(k):
        lam_k = up_series_mul(lam_k, lam, order)
    lam_k1 = up_series_mul(lam_k, lam, order)

    a1 = up_compose_1mq(a_poly)
    b1q = [Fraction(0)] + up_compose_1mq(b_poly)  # B(1-q) * q
    c_series = [
        x - y
        for x, y in zip(
            up_series_mul(a1, lam_k, order) + [Fraction(0)] * order,
            up_series_mul(b1q, lam_k1, order) + [Fraction(0)] * order,
        )
    ][:order]

    lead = t - k
    for i in range(min(max(lead, 0), len(c_series))):
        if c_series[i]:
            raise DivergentInput(
                f"integrand has a nonintegrable corner at p=1 "
                f"(q^{i - lead} coefficient {c_series[i]})"
            )

    coef_mag = max(
        [abs(c.numerator) / c.denominator for c in a1 + b1q if c] + [1]
    )
    guard = digits + 25 + int(math.log10(float(coef_mag)) + 1)
    with mp.workdps(guard):
        q0 = mp.mpf(1) / 4
        sign = 1 if k % 2 == 0 else -1
        right = mp.mpf(0)
        last = mp.mpf(0)
        for idx in range(max(lead, 0), order):
            c = c_series[idx] if idx < len(c_series) else Fraction(0)
            if not c:
                continue
            e = idx - lead  # power of q after cancelling q^(k-t)
            term = mp.mpf(c.numerator) / c.denominator * q0 ** (e + 1) / (e + 1)
            right += term
            last = term
        right *= sign
        trunc_est = abs(last)

        a_mpf = [mp.mpf(c.numerator) / c.denominator for c in a_poly]
        b_mpf = [mp.mpf(c.numerator) / c.denominator for c in b_poly]

        def integrand(p):
            lg = mp.log(p)
            av = mp.mpf(0)
            for c in reversed(a_mpf):
                av = av * p + c
            bv = mp.mpf(0)
            for c in reversed(b_mpf):
                bv = bv * p + c
            return (av * lg**k + bv * lg ** (k + 1)) / (1 - p) ** t

        left, err = mp.quad(integrand, [0, mp.mpf(3) / 4], error=True, maxdegree=9)
        total = left + right

        tol = mp.mpf(10) ** (-(digits / 2))
        if err + trunc_est > tol * (1 + abs(total)):
            raise NonConvergent(
                f"quadrature error {mp.nstr(err + trunc_est)} above target {mp.nstr(tol)}"
            )
    with mp.workdps(digits):
        return +total


# ---------------------------------------------------------------------------
# Monte Carlo estimation of the hypercube integrals.
# ---------------------------------------------------------------------------

_DIMS = {"zeta2": 2, "zeta3": 3, "zeta4": 4}


@dataclass(frozen=True)
class McResult:
    """Monte Carlo estimate with its empirical standard error."""

    family: str
    n: int
    value: float
    std_error: float
    samples: int
    seed: int
    backend: str

    def within_sigmas(self, reference, sigmas: float = 3.0) -> bool:
        return abs(self.value - float(reference)) <= sigmas * self.std_error


def mc_integral(spec: FamilySpec, samples: int = 10_000_000, seed: int = 0,
                batch_size: int = 1_000_000) -> McResult:
    """Plain Monte Carlo over the unit hypercube.

    Batches draw from seeds spawned off one SeedSequence, and batch means
    combine through exact float summation, so results depend only on
    (seed, batch_size), not on scheduling.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    dims = _DIMS[spec.family]
    evaluators = {2: kernels.mc_eval2, 3: kernels.mc_eval3, 4: kernels.mc_eval4}
    evaluate = evaluators[dims]

    n_batches = (samples + batch_size - 1) // batch_size
    children = np.random.SeedSequence(seed).spawn(n_batches)
    sums = []
    sq_sums = []
    done = 0
    for child in children:
        count = min(batch_size, samples - done)
        rng = np.random.default_rng(child)
        cols = rng.random((dims, count))
        out = np.empty(count, dtype=np.float64)
        evaluate(spec.n, *cols, out)
        sums.append(math.fsum(out))
        sq_sums.append(float(np.sum(out * out)))
        done += count
    mean = math.fsum(sums) / samples
    second = math.fsum(sq_sums) / samples
    var = max(second - mean * mean, 0.0) * samples / (samples - 1)
    return McResult(
        family=spec.family,
        n=spec.n,
        value=mean,
        std_error=math.sqrt(var / samples),
        samples=samples,
        seed=seed,
        backend=kernels.BACKEND,
    )
