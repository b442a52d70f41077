"""Tests for the stabilizing-sum test-ideal engine and the nu/fpt search."""

from fractions import Fraction

import pytest

from cartierlab.groebner import Ideal, ideal_contains, ideal_equal
from cartierlab.polyring import Ring, parse_polynomial, parse_rational
from cartierlab.testideal import (
    NotStabilizedError,
    PrincipalPair,
    cross_checked_tau,
    default_power_n,
    fpt_search,
    nu_value,
    polynomial_ambient,
    quotient_ambient,
    tau,
    tau_polynomial,
    tau_quotient,
)


def pair_on(ring, g_text, t_text, w_text=None):
    if w_text is None:
        ambient = polynomial_ambient(ring)
    else:
        ambient = quotient_ambient(ring, parse_polynomial(w_text, ring))
    return PrincipalPair(ambient, parse_polynomial(g_text, ring), parse_rational(t_text))


def ideal_of(ring, *gens):
    return Ideal(ring, [parse_polynomial(g, ring) for g in gens])


def test_tau_univariate_table():
    for p in (2, 3, 5, 7):
        R = Ring(p, ["x"])
        assert ideal_equal(tau_polynomial(pair_on(R, "x", "1/2")).ideal, ideal_of(R, "1"))
        assert ideal_equal(tau_polynomial(pair_on(R, "x", "1")).ideal, ideal_of(R, "x"))
        assert ideal_equal(tau_polynomial(pair_on(R, "x", "3/2")).ideal, ideal_of(R, "x"))
        assert ideal_equal(tau_polynomial(pair_on(R, "x", "2")).ideal, ideal_of(R, "x^2"))


def test_tau_cusp():
    R = Ring(7, ["x", "y"])
    result = tau_polynomial(pair_on(R, "x^2 + y^3", "5/6"))
    assert ideal_equal(result.ideal, ideal_of(R, "x", "y"))
    assert result.stabilized_at_e <= 3


def test_tau_t_zero_and_unit_g():
    R = Ring(3, ["x"])
    assert tau_polynomial(pair_on(R, "x", "0")).ideal.is_unit()
    assert tau_polynomial(pair_on(R, "2", "7/2")).ideal.is_unit()


def test_scheme_agreement():
    for p in (3, 7):
        R = Ring(p, ["x", "y"])
        for g, t in [("x", "1/2"), ("x", "3/2"), ("x", "2"), ("x*y", "1"),
                     ("x^2 + y^3", "5/6")]:
            classical, premult, agree = cross_checked_tau(pair_on(R, g, t))
            assert agree, (p, g, t)


def test_premultiplied_with_explicit_small_power():
    # N = 1 is valid while t <= 1: both schemes agree there.
    R = Ring(3, ["x"])
    for t in ("1/2", "1"):
        pair = pair_on(R, "x", t)
        a = tau_polynomial(pair)
        b = tau_polynomial(pair, scheme="premultiplied", N=1)
        assert ideal_equal(a.ideal, b.ideal)


def test_default_power_grows_with_t():
    assert default_power_n(Fraction(1, 2)) == 1
    assert default_power_n(Fraction(1)) == 1
    assert default_power_n(Fraction(3, 2)) == 2
    assert default_power_n(Fraction(2)) == 2


def test_ascending_chain_property():
    R = Ring(5, ["x", "y"])
    result = tau_polynomial(pair_on(R, "x^2 + y^3", "5/6"))
    for e in range(1, result.stabilized_at_e + 1):
        prev = result.partial_sum(e - 1)
        cur = result.partial_sum(e)
        for gen in prev.generators:
            assert ideal_contains(cur, gen)


def test_terms_sum_to_ideal():
    R = Ring(5, ["x", "y"])
    result = tau_polynomial(pair_on(R, "x*y", "1"))
    assert ideal_equal(result.partial_sum(result.stabilized_at_e), result.ideal)


def test_monotone_in_t():
    R = Ring(5, ["x", "y"])
    pairs = [pair_on(R, "x^2 + y^3", t) for t in ("1/2", "5/6", "1", "3/2")]
    ideals = [tau_polynomial(p).ideal for p in pairs]
    for small, big in zip(ideals, ideals[1:]):
        for gen in big.generators:
            assert ideal_contains(small, gen)


def test_skoda_shift():
    for p in (3, 5):
        R = Ring(p, ["x", "y"])
        for g, t in [("x", "1/2"), ("x*y", "1"), ("x^2 + y^3", "5/6")]:
            g_poly = parse_polynomial(g, R)
            base = tau_polynomial(pair_on(R, g, t)).ideal
            shifted = tau_polynomial(
                PrincipalPair(polynomial_ambient(R), g_poly, parse_rational(t) + 1)
            ).ideal
            expected = Ideal(R, [g_poly * u for u in base.generators])
            assert ideal_equal(shifted, expected)


def test_not_stabilized_is_loud():
    R = Ring(3, ["x"])
    with pytest.raises(NotStabilizedError) as err:
        tau_polynomial(pair_on(R, "x", "1"), e_max=1, window=5)
    assert len(err.value.chain) == 2


def test_tau_quotient_regular_point():
    R = Ring(3, ["x", "z"])
    result = tau_quotient(pair_on(R, "z", "1", w_text="z^2 - x"))
    expected = ideal_of(R, "z", "x")  # preimage of (z) mod (z^2 - x)
    assert ideal_equal(result.ideal, expected)


def test_tau_quotient_t_zero_short_circuit():
    R = Ring(3, ["x", "z"])
    assert tau_quotient(pair_on(R, "1", "0", w_text="z^2 - x")).ideal.is_unit()
    R3 = Ring(3, ["x", "y", "z"])
    assert tau_quotient(pair_on(R3, "1", "0", w_text="z^2 - x*y")).ideal.is_unit()


def test_quadric_cone_chain_reaches_unit_at_e1():
    # Direct confirmation that the level-1 term of the cone's chain is the
    # unit ideal (the short-circuited value for the trivial pair).
    from cartierlab.frobenius import image_ideal_generators

    R = Ring(3, ["x", "y", "z"])
    w = parse_polynomial("z^2 - x*y", R)
    h = w.power(3 - 1)
    term = Ideal(R, image_ideal_generators(h, 1) + [w])
    assert term.is_unit()


def test_tau_dispatch():
    R = Ring(3, ["x", "z"])
    q = tau(pair_on(R, "z", "1", w_text="z^2 - x"))
    assert ideal_equal(q.ideal, ideal_of(R, "z", "x"))
    r = tau(pair_on(Ring(3, ["x"]), "x", "1"))
    assert ideal_equal(r.ideal, ideal_of(Ring(3, ["x"]), "x"))


def test_nu_values():
    R5 = Ring(5, ["x"])
    assert nu_value(parse_polynomial("x", R5), 1) == 4
    R3 = Ring(3, ["x", "y"])
    assert nu_value(parse_polynomial("x*y", R3), 1) == 2
    R7 = Ring(7, ["x", "y"])
    assert nu_value(parse_polynomial("x^2 + y^3", R7), 1) == 5


def test_nu_requires_maximal_ideal():
    R = Ring(5, ["x"])
    with pytest.raises(ValueError):
        nu_value(parse_polynomial("x + 1", R), 1)


def test_nu_monotonicity():
    R = Ring(7, ["x", "y"])
    g = parse_polynomial("x^2 + y^3", R)
    values = {e: nu_value(g, e) for e in (1, 2, 3)}
    assert values[1] == 5 and values[2] == 40
    for e in (1, 2):
        assert values[e + 1] >= 7 * values[e]


def test_fpt_smooth_divisor():
    for p in (3, 5):
        R = Ring(p, ["x"])
        lo, hi = fpt_search(parse_polynomial("x", R), e_max=1)
        assert hi == 1
        assert lo < 1 <= hi
        assert hi - lo <= Fraction(1, p)


def test_fpt_binomial_xy():
    R = Ring(5, ["x", "y"])
    lo, hi = fpt_search(parse_polynomial("x*y", R), e_max=2)
    assert hi == 1
    assert hi - lo <= Fraction(1, 25)


def test_fpt_cusp():
    R = Ring(7, ["x", "y"])
    lo, hi = fpt_search(parse_polynomial("x^2 + y^3", R), e_max=2, denominator_bound=50)
    assert hi == Fraction(5, 6)
    assert lo == Fraction(40, 49)
    assert hi - lo <= Fraction(1, 49)


def test_unit_detection_matches_nu_bounds():
    # tau(g^t) = (1) iff t below the threshold; check both sides of the
    # nu bracket for a few pairs.
    cases = [
        (Ring(5, ["x"]), "x", 1),
        (Ring(5, ["x", "y"]), "x*y", 1),
        (Ring(7, ["x", "y"]), "x^2 + y^3", 2),
    ]
    for R, g_text, e in cases:
        g = parse_polynomial(g_text, R)
        q = R.p**e
        nu = nu_value(g, e)
        below = Fraction(nu, q)
        above = Fraction(nu + 1, q)
        if below > 0:
            assert tau_polynomial(PrincipalPair(polynomial_ambient(R), g, below)).ideal.is_unit()
        assert not tau_polynomial(PrincipalPair(polynomial_ambient(R), g, above)).ideal.is_unit()


def test_pair_validation():
    R = Ring(3, ["x", "z"])
    with pytest.raises(ValueError):
        pair_on(R, "z^2 - x", "1", w_text="z^2 - x")  # g reduces to zero
    with pytest.raises(ValueError):
        PrincipalPair(polynomial_ambient(R), parse_polynomial("x", R), Fraction(-1, 2))
    with pytest.raises(ValueError):
        quotient_ambient(R, parse_polynomial("1", R))
