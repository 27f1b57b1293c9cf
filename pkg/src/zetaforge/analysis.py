"""Bounding constants, prime-power growth, and denominator structure.

Three reports feed the verification layer:

* `sup_ratio` / `decay_certificate`: the supremum C of each family's shape
  ratio over the open hypercube, located numerically (grid scan + damped
  Newton on the log-ratio) and matched against its closed algebraic form;
  the family decays like C^n, and e^(d+0.01) * C < 1 is the certificate
  that lcm-denominator growth e^(d n) loses to the decay.
* `lcm_growth`: Chebyshev psi(n) = log lcm(1..n) accumulated in >= 30-digit
  arithmetic over a prime sieve, with an exact big-integer cross-check on
  an initial range and the empirical point where psi(n)/n settles under a
  threshold.
* `denominator_report` / `decay_table`: how the reduced forms' denominators
  sit inside lcm(1..n)^d versus lcm(1..2n)^d, and the size of the
  denominator-scaled values -- the structural reason the wider denominators
  do not yield an irrationality bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .exact import lcm_upto
from .oracle import eval_form
from .reducer import FAMILIES, FamilySpec, FormCache, compute_form

_GRID = 64
_TOP_ORDER = {"zeta2": 2, "zeta3": 3, "zeta4": 4}


class NoInteriorMaximum(Exception):
    """The ascent left the open cube instead of settling at an interior point."""


# ---------------------------------------------------------------------------
# Shape ratios: value and analytic log-gradient in reduced coordinates.
# The zeta4 ratio is symmetric in its two inner variables, so its reduced
# form sets them equal and optimizes over three coordinates.
# ---------------------------------------------------------------------------


def _ratio2(x, y):
    return x * (1 - x) * y * (1 - y) / (1 - x * y)


def _grad2(x, y):
    d = 1 - x * y
    return (1 / x - 1 / (1 - x) + y / d, 1 / y - 1 / (1 - y) + x / d)


def _ratio3(x, y, z):
    return x * (1 - x) * y * (1 - y) * z * (1 - z) / (1 - (1 - x * y) * z)


def _grad3(x, y, z):
    u = 1 - x * y
    d = 1 - u * z
    return (
        1 / x - 1 / (1 - x) - y * z / d,
        1 / y - 1 / (1 - y) - x * z / d,
        1 / z - 1 / (1 - z) + u / d,
    )


def _ratio4(x, y, z):
    u = 1 - x * y
    d = 1 - u * z
    return x * (1 - x) * y * (1 - y) * (z * (1 - z)) ** 2 * u * u / (d * d)


def _grad4(x, y, z):
    u = 1 - x * y
    d = 1 - u * z
    return (
        1 / x - 1 / (1 - x) - 2 * y / u - 2 * y * z / d,
        1 / y - 1 / (1 - y) - 2 * x / u - 2 * x * z / d,
        2 / z - 2 / (1 - z) + 2 * u / d,
    )


_RATIOS = {"zeta2": (_ratio2, _grad2, 2), "zeta3": (_ratio3, _grad3, 3), "zeta4": (_ratio4, _grad4, 3)}
_DECAY_EXPONENT = {"zeta2": "2.01", "zeta3": "3.01", "zeta4": "4.01"}


def ratio_value(family: str, point):
    """Shape ratio at a point in reduced coordinates (mpf or float)."""
    return _RATIOS[family][0](*point)


def ratio_gradient(family: str, point):
    """Analytic gradient of log(ratio) in reduced coordinates."""
    return _RATIOS[family][1](*point)


def closed_form_sup(family: str, dps: int = 50):
    """The algebraic value of the supremum, with a printable description."""
    with mp.workdps(dps):
        if family == "zeta2":
            return +(((mp.sqrt(5) - 1) / 2) ** 5), "((sqrt(5)-1)/2)^5"
        if family == "zeta3":
            return +((mp.sqrt(2) - 1) ** 4), "(sqrt(2)-1)^4"
        if family == "zeta4":
            r17 = mp.sqrt(17)
            value = (r17 - 7) ** 4 * (r17 - 3) ** 2 / (256 * (1 + r17) ** 2)
            return +value, "(sqrt(17)-7)^4 (sqrt(17)-3)^2 / (256 (1+sqrt(17))^2)"
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class BoundCertificate:
    """Supremum + decay certificate for one family."""

    family: str
    closed_form: str
    closed_form_value: mp.mpf
    numeric_sup: mp.mpf
    argmax: tuple
    grid_max: float
    decay_exponent: str
    decay_product: mp.mpf
    satisfied: bool

    def as_record(self, digits: int = 20) -> dict:
        return {
            "family": self.family,
            "closed_form": self.closed_form,
            "closed_form_value": mp.nstr(self.closed_form_value, digits),
            "numeric_sup": mp.nstr(self.numeric_sup, digits),
            "argmax": [mp.nstr(c, digits) for c in self.argmax],
            "grid_max": repr(self.grid_max),
            "decay_exponent": self.decay_exponent,
            "decay_product": mp.nstr(self.decay_product, digits),
            "satisfied": self.satisfied,
        }


def _grid_argmax(family: str):
    """Coarse scan over midpoint grid; returns (best value, best point)."""
    axis = (np.arange(_GRID) + 0.5) / _GRID
    dims = _RATIOS[family][2]
    grids = np.meshgrid(*([axis] * dims), indexing="ij")
    vals = _RATIOS[family][0](*grids)
    flat = int(np.argmax(vals))
    idx = np.unravel_index(flat, vals.shape)
    point = tuple(float(axis[i]) for i in idx)
    return float(vals[idx]), point


def _newton_polish(family: str, start, dps: int, grad_tol):
    """Damped Newton ascent on log(ratio) from a grid point, in mpf."""
    _, grad_fn, dims = _RATIOS[family]
    value_fn = _RATIOS[family][0]
    point = [mp.mpf(c) for c in start]
    h = mp.mpf(10) ** (-dps // 3)
    eps = mp.mpf("1e-9")
    for _ in range(80):
        grad = mp.matrix(grad_fn(*point))
        if mp.norm(grad, mp.inf) < grad_tol:
            return tuple(point)
        hess = mp.zeros(dims, dims)
        for jj in range(dims):
            bumped_p = list(point)
            bumped_m = list(point)
            bumped_p[jj] += h
            bumped_m[jj] -= h
            gp = grad_fn(*bumped_p)
            gm = grad_fn(*bumped_m)
            for ii in range(dims):
                hess[ii, jj] = (gp[ii] - gm[ii]) / (2 * h)
        step = mp.lu_solve(hess, -grad)
        scale = mp.mpf(1)
        base_val = value_fn(*point)
        while scale > mp.mpf("1e-12"):
            cand = [point[i] + scale * step[i] for i in range(dims)]
            if all(eps < c < 1 - eps for c in cand) and value_fn(*cand) >= base_val:
                point = cand
                break
            scale /= 2
        else:
            raise NoInteriorMaximum(f"{family}: ascent stalled at {point}")
    raise NoInteriorMaximum(f"{family}: no convergence to gradient tolerance")


def sup_ratio(family: str, digits: int = 50) -> BoundCertificate:
    """Locate the interior supremum and certify it against the closed form.

    The numeric path is independent of the algebra: midpoint grid scan at
    resolution 64 per axis, then Newton ascent to gradient norm below
    1e-12 (or tighter when digits allow).  `satisfied` reports both the
    closed-form match at 1e-8 and the decay product being below 1.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    dps = digits + 15
    with mp.workdps(dps):
        grid_max, start = _grid_argmax(family)
        grad_tol = min(mp.mpf("1e-12"), mp.mpf(10) ** (-(digits - 10)))
        argmax = _newton_polish(family, start, dps, grad_tol)
        numeric = ratio_value(family, argmax)
        closed_value, closed_text = closed_form_sup(family, dps)
        exponent = mp.mpf(_DECAY_EXPONENT[family])
        product = mp.e**exponent * closed_value
        matches = abs(numeric - closed_value) < mp.mpf("1e-8")
        satisfied = bool(matches and product < 1)
    with mp.workdps(digits):
        return BoundCertificate(
            family=family,
            closed_form=closed_text,
            closed_form_value=+closed_value,
            numeric_sup=+numeric,
            argmax=tuple(+c for c in argmax),
            grid_max=grid_max,
            decay_exponent=_DECAY_EXPONENT[family],
            decay_product=+product,
            satisfied=satisfied,
        )


def decay_certificate(family: str, digits: int = 50) -> BoundCertificate:
    """Certificate that e^(d+0.01) * C < 1 for the family's supremum C."""
    return sup_ratio(family, digits)


# ---------------------------------------------------------------------------
# Chebyshev psi and exact lcm growth.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LcmGrowthReport:
    """psi(n) = log lcm(1..n): exact cross-check and asymptotic behavior."""

    n_max: int
    dps: int
    exact_upto: int
    exact_ok: bool
    exact_log_gap: float
    psi_at_nmax: mp.mpf
    ratio_at_nmax: float
    max_ratio: float
    max_ratio_at: int
    threshold: str
    settle_n: int
    samples: tuple

    def as_record(self) -> dict:
        return {
            "n_max": self.n_max,
            "dps": self.dps,
            "exact_upto": self.exact_upto,
            "exact_ok": self.exact_ok,
            "exact_log_gap": repr(self.exact_log_gap),
            "psi_at_nmax": mp.nstr(self.psi_at_nmax, 25),
            "ratio_at_nmax": repr(self.ratio_at_nmax),
            "max_ratio": repr(self.max_ratio),
            "max_ratio_at": self.max_ratio_at,
            "threshold": self.threshold,
            "settle_n": self.settle_n,
            "samples": [
                {"n": n, "psi": mp.nstr(p, 25), "ratio": repr(r)} for n, p, r in self.samples
            ],
        }


def _prime_sieve(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def _prime_power_root(n: int) -> int:
    """p if n = p^k for some k >= 1, else 0."""
    if n < 2:
        return 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else 0
        p += 1
    return n  # prime


def lcm_growth(n_max: int = 1_000_000, exact_upto: int = 2000, dps: int = 30,
               threshold: str = "1.0025") -> LcmGrowthReport:
    """Accumulate psi over prime powers and certify lcm growth behavior.

    Exact range: exp(psi(n)) is the product of the sieve's prime powers and
    must equal the big-integer lcm(1..n) for every n <= exact_upto -- the
    comparison is exact integer equality, not floats.  Beyond that, psi is
    accumulated as >= `dps`-digit values at every prime power; ratios
    psi(n)/n peak exactly at prime powers, so scanning events suffices for
    the maximum and for the last time psi(n)/n >= threshold.
    """
    if exact_upto > n_max:
        raise ValueError("exact_upto cannot exceed n_max")
    primes = _prime_sieve(n_max)
    with mp.workdps(dps + 5):
        thr = mp.mpf(threshold)
        events: list[tuple[int, int]] = []  # (position, prime)
        for p in primes.tolist():
            q = p
            while q <= n_max:
                events.append((q, p))
                q *= p
        events.sort()

        log_cache: dict[int, mp.mpf] = {}
        psi = mp.mpf(0)
        max_ratio = -1.0
        max_ratio_at = 0
        settle_n = 1
        sample_targets = [10 ** e for e in range(1, 7) if 10 ** e <= n_max]
        samples = []
        next_sample = 0
        for pos, p in events:
            lp = log_cache.get(p)
            if lp is None:
                lp = mp.log(p)
                log_cache[p] = lp
            while next_sample < len(sample_targets) and sample_targets[next_sample] < pos:
                nn = sample_targets[next_sample]
                samples.append((nn, +psi, float(psi / nn)))
                next_sample += 1
            psi += lp
            ratio = psi / pos
            fratio = float(ratio)
            if fratio > max_ratio:
                max_ratio = fratio
                max_ratio_at = pos
            if ratio >= thr:
                settle_n = pos + 1
        while next_sample < len(sample_targets):
            nn = sample_targets[next_sample]
            samples.append((nn, +psi, float(psi / nn)))
            next_sample += 1

        # Exact cross-check: prime-power product == lcm as integers, plus
        # agreement of the float psi with the exact log.
        lcm_acc = 1
        product = 1
        psi_small = mp.mpf(0)
        exact_ok = True
        for n in range(2, exact_upto + 1):
            lcm_acc = math.lcm(lcm_acc, n)
            root = _prime_power_root(n)
            if root:
                product *= root
                psi_small += log_cache.get(root) or mp.log(root)
            if product != lcm_acc:
                exact_ok = False
                break
        exact_log_gap = float(abs(psi_small - mp.log(mp.mpf(lcm_acc))))
        if exact_log_gap > 10.0 ** (-(dps - 10)):
            exact_ok = False

        psi_at = +psi
        ratio_at = float(psi / n_max)
    with mp.workdps(dps):
        return LcmGrowthReport(
            n_max=n_max,
            dps=dps,
            exact_upto=exact_upto,
            exact_ok=exact_ok,
            exact_log_gap=exact_log_gap,
            psi_at_nmax=+psi_at,
            ratio_at_nmax=ratio_at,
            max_ratio=max_ratio,
            max_ratio_at=max_ratio_at,
            threshold=threshold,
            settle_n=settle_n,
            samples=tuple(samples),
        )


# ---------------------------------------------------------------------------
# Denominator structure and decay tables of the reduced forms.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DenominatorRow:
    n: int
    den_rational: int
    den_zeta: int
    narrow_target: int
    wide_target: int
    divides_narrow: bool
    divides_wide: bool


@dataclass(frozen=True)
class DenominatorReport:
    """Do the form denominators fit in lcm(1..n)^d or only lcm(1..2n)^d?"""

    family: str
    zeta_order: int
    rows: tuple
    wide_all: bool
    narrow_failures: tuple
    growth_exponent: str
    growth_product: mp.mpf
    growth_exceeds_one: bool

    def as_record(self) -> dict:
        return {
            "family": self.family,
            "zeta_order": self.zeta_order,
            "rows": [
                {
                    "n": r.n,
                    "den_rational": r.den_rational,
                    "den_zeta": r.den_zeta,
                    "narrow_target": r.narrow_target,
                    "wide_target": r.wide_target,
                    "divides_narrow": r.divides_narrow,
                    "divides_wide": r.divides_wide,
                }
                for r in self.rows
            ],
            "wide_all": self.wide_all,
            "narrow_failures": list(self.narrow_failures),
            "growth_exponent": self.growth_exponent,
            "growth_product": mp.nstr(self.growth_product, 10),
            "growth_exceeds_one": self.growth_exceeds_one,
        }


def denominator_report(family: str, n_max: int, cache: FormCache | None = None,
                       digits: int = 50) -> DenominatorReport:
    """Compare reduced-form denominators against lcm powers.

    The wide target lcm(1..2n)^d always clears the denominators in the
    verified range; the narrow lcm(1..n)^d does not.  But wide clearing
    costs growth e^(2 d n), and e^(2(d+0.01)) * C > 1 -- recorded here --
    so the wide route certifies no irrationality measure.
    """
    order = _TOP_ORDER[family]
    rows = []
    for n in range(n_max + 1):
        form = compute_form(FamilySpec(family, n), cache)
        den_r = form.rational.denominator
        den_s = form.zeta.get(order, Fraction(0)).denominator
        narrow = lcm_upto(n) ** order
        wide = lcm_upto(2 * n) ** order
        rows.append(
            DenominatorRow(
                n=n,
                den_rational=den_r,
                den_zeta=den_s,
                narrow_target=narrow,
                wide_target=wide,
                divides_narrow=(narrow % den_r == 0) and (narrow % den_s == 0),
                divides_wide=(wide % den_r == 0) and (wide % den_s == 0),
            )
        )
    with mp.workdps(digits):
        c_value, _ = closed_form_sup(family, digits)
        exponent = 2 * (order + mp.mpf("0.01"))
        product = mp.e**exponent * c_value
    return DenominatorReport(
        family=family,
        zeta_order=order,
        rows=tuple(rows),
        wide_all=all(r.divides_wide for r in rows),
        narrow_failures=tuple(r.n for r in rows if not r.divides_narrow),
        growth_exponent=mp.nstr(exponent, 6),
        growth_product=product,
        growth_exceeds_one=bool(product > 1),
    )


@dataclass(frozen=True)
class DecayRow:
    n: int
    value: mp.mpf
    bound: mp.mpf
    within: bool
    den_lcm: int
    scaled: mp.mpf


@dataclass(frozen=True)
class DecayTable:
    family: str
    base: mp.mpf
    sup: mp.mpf
    rows: tuple
    all_within: bool
    all_positive: bool

    def as_record(self, digits: int = 15) -> dict:
        return {
            "family": self.family,
            "base": mp.nstr(self.base, digits),
            "sup": mp.nstr(self.sup, digits),
            "rows": [
                {
                    "n": r.n,
                    "value": mp.nstr(r.value, digits),
                    "bound": mp.nstr(r.bound, digits),
                    "within": r.within,
                    "den_lcm": r.den_lcm,
                    "scaled": mp.nstr(r.scaled, digits),
                }
                for r in self.rows
            ],
            "all_within": self.all_within,
            "all_positive": self.all_positive,
        }


def decay_table(family: str, n_max: int, digits: int = 50,
                cache: FormCache | None = None) -> DecayTable:
    """|I_n| against base * C^n, plus denominator-scaled magnitudes.

    The bound chain is elementary: the integrand of member n is the member-0
    integrand times the shape ratio to the n-th power, so |I_n| <= base*C^n
    with base = |I_0|.  `scaled` multiplies |I_n| by the lcm of its two
    denominators -- the quantity that would need to tend to 0 for an
    irrationality proof, and visibly does not.
    """
    sup_value, _ = closed_form_sup(family, digits + 10)
    base_form = compute_form(FamilySpec(family, 0), cache)
    with mp.workdps(digits + 10):
        base = abs(eval_form(base_form, digits + 10))
        rows = []
        for n in range(n_max + 1):
            form = compute_form(FamilySpec(family, n), cache)
            value = abs(eval_form(form, digits + 10))
            bound = base * sup_value**n
            order = _TOP_ORDER[family]
            den_lcm = math.lcm(
                form.rational.denominator,
                form.zeta.get(order, Fraction(0)).denominator,
            )
            rows.append(
                DecayRow(
                    n=n,
                    value=+value,
                    bound=+bound,
                    within=bool(value <= bound),
                    den_lcm=den_lcm,
                    scaled=+(value * den_lcm),
                )
            )
    return DecayTable(
        family=family,
        base=base,
        sup=sup_value,
        rows=tuple(rows),
        all_within=all(r.within for r in rows),
        all_positive=all(r.value > 0 for r in rows),
    )
