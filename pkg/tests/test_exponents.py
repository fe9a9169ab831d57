"""Exponent-recursion tests: frozen constants, exact step identities, and
an independent sympy.Rational reimplementation as the second route."""

from fractions import Fraction as F

import pytest
import sympy

from deltalab.exponents import (
    MAX_ORDER,
    ExponentTuple,
    alpha_closed_form,
    base_tuple,
    bound_eval,
    derive_tuple,
    step,
)

LEMMA2 = (F(139, 194), F(13, 194), F(163, 388), F(31, 194), F(745, 822), F(215, 194), F(21, 97))


def tuple_fields(t):
    return (t.a, t.b, t.xi, t.eta, t.alpha, t.gamma, t.delta)


def sympy_step(vals):
    """Independent reimplementation over sympy.Rational."""
    a, b, xi, eta, al, ga, de = vals
    d = 2 * (b + 1)
    return (
        (a + b + 1) / d,
        b / d,
        ((xi + 1) * (b + 1) - a * eta) / d,
        eta / d,
        (al + 1) / 2,
        (a * de + (b + 1) * (ga + 1)) / d,
        de / d,
    )


def test_base_tuple_values():
    t = base_tuple()
    assert tuple_fields(t) == (F(1, 2), F(13, 84), F(0), F(31, 84), F(334, 411), F(1), F(1, 2))
    assert t.order == 4
    assert t.eps_on == {"b", "eta"}
    assert t.xi == 0


def test_step_gives_order5_constants():
    assert tuple_fields(step(base_tuple())) == LEMMA2


def test_two_steps_independent_hand_values():
    t6 = step(step(base_tuple()))
    assert t6.a == F(173, 207)
    assert t6.b == F(13, 414)
    assert t6.alpha == F(1567, 1644)  # (745/822 + 1)/2


def test_matches_independent_sympy_route_to_order_12():
    ours = base_tuple()
    theirs = tuple(
        sympy.Rational(v.numerator, v.denominator) for v in tuple_fields(ours)
    )
    for _ in range(8):
        ours = step(ours)
        theirs = sympy_step(theirs)
        for mine, other in zip(tuple_fields(ours), theirs):
            assert mine.numerator == other.p and mine.denominator == other.q


def test_recursion_identities_exact_to_50():
    t = base_tuple()
    for j in range(5, 51):
        tn = step(t)
        assert 2 * (t.b + 1) * tn.b == t.b
        assert 2 * (t.b + 1) * tn.eta == t.eta
        assert 2 * (t.b + 1) * tn.delta == t.delta
        assert tn.b < t.b
        assert tn.alpha == alpha_closed_form(j)
        assert tn.order == j
        t = tn


def test_positivity_and_denominator_growth():
    prev_denom = 1
    for j in range(4, 51):
        t = derive_tuple(j)
        vals = tuple_fields(t)
        for name, v in zip("a b xi eta alpha gamma delta".split(), vals):
            if name == "xi" and j == 4:
                assert v == 0
            else:
                assert v > 0, (j, name, v)
        assert t.b.denominator >= prev_denom
        prev_denom = t.b.denominator
    assert derive_tuple(50).b.denominator > 10**12


def test_derive_tuple_dispatch():
    assert derive_tuple(4) == base_tuple()
    assert tuple_fields(derive_tuple(5)) == LEMMA2
    assert derive_tuple(6).alpha == (F(745, 822) + 1) / 2


def test_derive_tuple_domain_errors():
    with pytest.raises(ValueError):
        derive_tuple(3)
    with pytest.raises(ValueError):
        derive_tuple(MAX_ORDER + 1)
    with pytest.raises(ValueError):
        ExponentTuple(order=3, a=F(1), b=F(1), xi=F(0), eta=F(1), alpha=F(1), gamma=F(1), delta=F(1))


def test_eps_flags_propagate_to_b_eta_only():
    t = derive_tuple(30)
    assert t.eps_on == {"b", "eta"}


def test_bound_eval_at_unit_point():
    assert bound_eval(derive_tuple(5), 1, 1, 0.0) == 4.0
    assert bound_eval(base_tuple(), 1, 1, 0.0) == 4.0


def test_bound_eval_against_term_by_term_oracle():
    t = derive_tuple(5)
    M, T = 2.0**10, 2.0**20
    # independent term-by-term evaluation of the four powers
    expected = (
        M ** (139 / 194) * T ** (13 / 194)
        + M ** (163 / 388) * T ** (31 / 194)
        + M ** (745 / 822)
        + M ** (215 / 194) * T ** (-21 / 97)
    )
    assert bound_eval(t, M, T, 0.0) == pytest.approx(expected, rel=1e-13)


def test_bound_eval_eps_hits_flagged_terms_only():
    t = derive_tuple(5)
    M, T = 8.0, 64.0
    base = bound_eval(t, M, T, 0.0)
    with_eps = bound_eval(t, M, T, 0.01)
    # flagged terms scale by T^0.01, unflagged are unchanged
    t1 = M ** float(t.a) * T ** float(t.b)
    t2 = M ** float(t.xi) * T ** float(t.eta)
    boost = T**0.01
    assert with_eps == pytest.approx(base + (boost - 1) * (t1 + t2), rel=1e-12)


def test_bound_eval_validation():
    t = base_tuple()
    with pytest.raises(ValueError):
        bound_eval(t, 0.5, 1.0)
    with pytest.raises(ValueError):
        bound_eval(t, 1.0, 0.0)
    with pytest.raises(ValueError):
        bound_eval(t, 1.0, 1.0, -0.1)


def test_json_layout():
    d = derive_tuple(5).as_dict()
    assert d["a"] == "139/194"
    assert d["xi"] == "163/388"
    assert d["eps_on"] == ["b", "eta"]
    assert d["order"] == 5
