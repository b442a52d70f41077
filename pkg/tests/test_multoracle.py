"""Tests for the polyhedral multiplier oracle and the tau comparison."""

from fractions import Fraction

import pytest

from cartierlab.groebner import ideal_equal, Ideal
from cartierlab.multoracle import (
    ComparisonReport,
    NewtonData,
    compare_tau_multiplier,
    divisor_multiplier_exponent,
    howald_multiplier,
)
from cartierlab.polyring import Ring, parse_polynomial, parse_rational
from cartierlab.testideal import PrincipalPair, polynomial_ambient


def ideal_of(ring, *gens):
    return Ideal(ring, [parse_polynomial(g, ring) for g in gens])


def mono_pair(ring, g, t):
    return PrincipalPair(polynomial_ambient(ring), parse_polynomial(g, ring),
                         parse_rational(t))


def test_howald_examples():
    R1 = Ring(5, ["x"])
    assert ideal_equal(howald_multiplier(NewtonData((1,), Fraction(3, 2)), R1),
                       ideal_of(R1, "x"))
    R2 = Ring(5, ["x", "y"])
    assert ideal_equal(howald_multiplier(NewtonData((1, 1), Fraction(1)), R2),
                       ideal_of(R2, "x*y"))
    assert ideal_equal(howald_multiplier(NewtonData((2, 1), Fraction(0)), R2),
                       ideal_of(R2, "1"))


def test_unit_iff_strictly_below_one():
    R = Ring(5, ["x", "y"])
    assert howald_multiplier(NewtonData((2, 1), Fraction(1, 2)), R).groebner_basis() == \
        ideal_of(R, "x").groebner_basis()
    # boundary t * v_i = 1 is not in the unit locus (strict inequality)
    assert not howald_multiplier(NewtonData((2, 0), Fraction(1, 2)), R).is_unit()
    assert howald_multiplier(NewtonData((2, 0), Fraction(1, 4)), R).is_unit()


def test_divisor_exponent_signed():
    assert divisor_multiplier_exponent([Fraction(-1)]) == (-1,)
    assert divisor_multiplier_exponent([Fraction(-1, 2)]) == (-1,)
    assert divisor_multiplier_exponent([Fraction(3, 2), Fraction(1)]) == (1, 1)
    assert divisor_multiplier_exponent([Fraction(0)]) == (0,)


def test_scaling_consistency():
    R = Ring(5, ["x", "y"])
    small = howald_multiplier(NewtonData((2, 3), Fraction(1, 2)), R)
    big = howald_multiplier(NewtonData((2, 3), Fraction(5, 6)), R)
    (gen_small,) = small.generators
    (gen_big,) = big.generators
    from cartierlab.groebner import ideal_contains
    assert ideal_contains(small, gen_big)


def test_integer_shift():
    R = Ring(5, ["x", "y"])
    for v, t in [((1, 2), Fraction(1, 2)), ((2, 3), Fraction(5, 6))]:
        base = howald_multiplier(NewtonData(v, t), R)
        shifted = howald_multiplier(NewtonData(v, t + 1), R)
        g = R.monomial(v)
        expected = Ideal(R, [g * u for u in base.generators])
        assert ideal_equal(shifted, expected)


def test_compare_examples():
    R3 = Ring(3, ["x"])
    rep = compare_tau_multiplier(mono_pair(R3, "x", "1/2"))
    assert rep.equal and rep.tau.is_unit()

    R5 = Ring(5, ["x", "y"])
    rep = compare_tau_multiplier(mono_pair(R5, "x*y", "1"))
    assert rep.equal
    assert ideal_equal(rep.multiplier, ideal_of(R5, "x*y"))

    rep = compare_tau_multiplier(mono_pair(R5, "x^2*y", "1/2"))
    assert ideal_equal(rep.multiplier, ideal_of(R5, "x"))
    assert rep.contained


def test_non_monomial_rejected():
    R = Ring(5, ["x", "y"])
    with pytest.raises(ValueError):
        compare_tau_multiplier(mono_pair(R, "x + y", "1/2"))
