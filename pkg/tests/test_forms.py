"""Linear forms in zeta values: reduction, combination, integerization."""

import random
from fractions import Fraction

import pytest

from zetaforge.forms import PFTerm, ZetaForm, form_combine, integerize, reduce_terms
from zetaforge.oracle import eval_form, sum_terms_numeric

# The k=2 part of the depth-1 zeta4 member, as a 15-term shifted-power list
# (coefficients of 1/(m+j)^a summed over m >= 1).  Reducing it exercises
# every code path at once: zeta tails, harmonic corrections, and exact
# cancellation of the four divergent a=1 terms.
FIFTEEN_TERMS = [
    PFTerm(3, 1, Fraction(-3)),
    PFTerm(2, 1, Fraction(5)),
    PFTerm(1, 1, Fraction(-2)),
    PFTerm(4, 2, Fraction(18)),
    PFTerm(3, 2, Fraction(-31)),
    PFTerm(2, 2, Fraction(15)),
    PFTerm(1, 2, Fraction(-2)),
    PFTerm(4, 3, Fraction(54)),
    PFTerm(3, 3, Fraction(-33)),
    PFTerm(2, 3, Fraction(-1)),
    PFTerm(1, 3, Fraction(2)),
    PFTerm(4, 4, Fraction(36)),
    PFTerm(3, 4, Fraction(3)),
    PFTerm(2, 4, Fraction(-11)),
    PFTerm(1, 4, Fraction(2)),
]


def test_pfterm_validation():
    with pytest.raises(ValueError):
        PFTerm(0, 1, Fraction(1))
    with pytest.raises(ValueError):
        PFTerm(2, -1, Fraction(1))
    with pytest.raises(ValueError):
        PFTerm(2, 1, Fraction(0))


def test_zetaform_rejects_low_orders():
    with pytest.raises(ValueError):
        ZetaForm(0, {1: 1})


def test_reduce_single_zeta_tail():
    assert reduce_terms([PFTerm(4, 0, Fraction(6))]) == ZetaForm(0, {4: 6})


def test_reduce_telescoping_pair():
    got = reduce_terms([PFTerm(1, 1, Fraction(1)), PFTerm(1, 2, Fraction(-1))])
    assert got == ZetaForm(Fraction(1, 2))
    assert got.is_finite


def test_reduce_lone_harmonic_is_divergent():
    got = reduce_terms([PFTerm(1, 0, Fraction(1))])
    assert not got.is_finite
    assert got.div_harmonic == 1


def test_reduce_fifteen_term_list():
    got = reduce_terms(FIFTEEN_TERMS)
    assert got == ZetaForm(Fraction(-423, 8), {2: 8, 3: -64, 4: 108})
    assert got.is_finite  # the four a=1 coefficients cancel: -2-2+2+2


def test_reduce_is_linear_and_order_independent():
    rng = random.Random(21)
    for _ in range(40):
        pool = [
            PFTerm(rng.randint(1, 4), rng.randint(0, 5), Fraction(rng.randint(1, 9), rng.randint(1, 4)) * rng.choice((1, -1)))
            for _ in range(rng.randint(1, 8))
        ]
        cut = rng.randint(0, len(pool))
        left, right = pool[:cut], pool[cut:]
        whole = reduce_terms(pool)
        assert whole == form_combine(reduce_terms(left), reduce_terms(right), 1)
        shuffled = pool[:]
        rng.shuffle(shuffled)
        assert reduce_terms(shuffled) == whole


def test_reduce_matches_direct_summation():
    rng = random.Random(22)
    for _ in range(10):
        terms = [
            PFTerm(rng.randint(2, 4), rng.randint(0, 4), Fraction(rng.randint(1, 5)) * rng.choice((1, -1)))
            for _ in range(rng.randint(1, 5))
        ]
        exact = eval_form(reduce_terms(terms), 30)
        bracket = sum_terms_numeric(terms, m_cut=20_000)
        assert bracket.contains(exact)


def test_form_combine_algebra():
    f = ZetaForm(Fraction(-13), {2: 8})
    g = ZetaForm(Fraction(-51), {2: -16, 3: -64})
    assert form_combine(f, g, 1) == ZetaForm(Fraction(-64), {2: -8, 3: -64})
    assert form_combine(f, g, 0) == f
    h = ZetaForm(0, {4: 6})
    assert form_combine(h, h, -1) == ZetaForm.zero()


def test_form_repr():
    assert repr(ZetaForm(Fraction(-935, 8), {4: 108})) == "-935/8 + 108*zeta(4)"
    assert repr(ZetaForm(0, {2: 1})) == "zeta(2)"
    assert repr(ZetaForm.zero()) == "0"


def test_record_roundtrip():
    form = ZetaForm(Fraction(-39185573, 3456), {4: 10476})
    rec = form.to_record(family="zeta4", n=2)
    assert rec["rational"] == "-39185573/3456"
    assert rec["zeta"] == {"4": "10476"}
    assert ZetaForm.from_record(rec) == form


def test_divergent_form_does_not_serialize():
    bad = reduce_terms([PFTerm(1, 0, Fraction(1))])
    with pytest.raises(ValueError):
        bad.to_record()


def test_integerize_golden_cases():
    i1 = ZetaForm(Fraction(-935, 8), {4: 108})
    res = integerize(i1, 8)
    assert res.ok and (res.r_scaled, res.s_scaled) == (-935, 864)

    res = integerize(i1, 1)
    assert not res.ok and res.offending == {"rational": 8}

    res = integerize(ZetaForm(0, {4: 6}), 1)
    assert res.ok and (res.r_scaled, res.s_scaled) == (0, 6)


def test_integerize_success_iff_denominators_clear():
    rng = random.Random(23)
    for _ in range(50):
        r = Fraction(rng.randint(-20, 20), rng.randint(1, 12))
        s = Fraction(rng.randint(-20, 20), rng.randint(1, 12))
        target = rng.randint(1, 30)
        res = integerize(ZetaForm(r, {4: s}), target)
        expected = (r * target).denominator == 1 and (s * target).denominator == 1
        assert bool(res) == expected


def test_integerize_rejects_mixed_support():
    with pytest.raises(ValueError):
        integerize(ZetaForm(0, {2: 1, 4: 1}), 10)
